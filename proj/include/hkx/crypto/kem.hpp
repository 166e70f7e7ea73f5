#pragma once

#include <memory>
#include <string>

#include "hkx/bytes.hpp"
#include "hkx/crypto/rng.hpp"

namespace hkx::crypto {

struct KemKeypair {
    Bytes public_key;
    Bytes private_key;
};

struct KemEncapsulation {
    Bytes ciphertext;
    Bytes shared_secret;
};

// Key encapsulation mechanism provider. Decapsulation of an invalid
// ciphertext follows the implicit-rejection convention: it returns a
// pseudorandom secret bound to the private key rather than an error.
class KemProvider {
public:
    virtual ~KemProvider() = default;
    virtual std::string name() const = 0;
    virtual size_t public_key_bytes() const = 0;
    virtual size_t ciphertext_bytes() const = 0;
    virtual size_t shared_secret_bytes() const = 0;
    virtual KemKeypair keygen(RandomSource& rng) const = 0;
    virtual KemEncapsulation encapsulate(ByteSpan public_key, RandomSource& rng) const = 0;
    virtual Bytes decapsulate(ByteSpan private_key, ByteSpan ciphertext) const = 0;
};

// Deterministic stand-in KEM with the declared wire sizes. Keygen expands a
// 32-byte seed into the public key; encapsulation hides a 32-byte message
// under a pad derived from the public key and fills the remaining ciphertext
// with a commitment to it; decapsulation re-derives the commitment and falls
// back to a rejection secret keyed on the private z value when it does not
// match. Structural behavior (sizes, round-trip, implicit rejection,
// determinism) matches a real KEM; the hardness assumption does not. Swap in
// a real provider for production use.
std::unique_ptr<KemProvider> make_model_kem(std::string name, size_t public_key_bytes,
                                            size_t ciphertext_bytes, size_t shared_secret_bytes);

}  // namespace hkx::crypto
