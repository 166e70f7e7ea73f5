#pragma once

#include <memory>
#include <string>

#include "hkx/bytes.hpp"
#include "hkx/crypto/rng.hpp"

namespace hkx::crypto {

struct EcdhKeypair {
    Bytes public_key;
    Bytes private_key;
};

// Montgomery-curve Diffie-Hellman provider (X25519 / X448).
class EcdhProvider {
public:
    virtual ~EcdhProvider() = default;
    virtual std::string name() const = 0;
    virtual size_t public_key_bytes() const = 0;
    virtual size_t shared_secret_bytes() const = 0;
    virtual EcdhKeypair keygen(RandomSource& rng) const = 0;
    virtual Bytes shared_secret(ByteSpan private_key, ByteSpan peer_public) const = 0;
};

std::unique_ptr<EcdhProvider> make_x25519();
std::unique_ptr<EcdhProvider> make_x448();

}  // namespace hkx::crypto
