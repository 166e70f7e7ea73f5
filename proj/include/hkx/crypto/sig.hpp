#pragma once

#include <memory>
#include <string>

#include "hkx/bytes.hpp"
#include "hkx/crypto/rng.hpp"

namespace hkx::crypto {

struct SigKeypair {
    Bytes signing_key;
    Bytes verifying_key;
};

class SignatureProvider {
public:
    virtual ~SignatureProvider() = default;
    virtual std::string name() const = 0;
    virtual size_t signing_key_bytes() const = 0;
    virtual size_t verifying_key_bytes() const = 0;
    virtual size_t signature_bytes() const = 0;
    virtual SigKeypair keygen(RandomSource& rng) const = 0;
    virtual Bytes sign(ByteSpan signing_key, ByteSpan message) const = 0;
    virtual bool verify(ByteSpan verifying_key, ByteSpan message, ByteSpan signature) const = 0;
};

std::unique_ptr<SignatureProvider> make_ed25519();

// ML-DSA-65-shaped deterministic stand-in (sk 4032, vk 1952, sig 3309).
// Same caveat as make_model_kem: structure and sizes only.
std::unique_ptr<SignatureProvider> make_mldsa65();

}  // namespace hkx::crypto
