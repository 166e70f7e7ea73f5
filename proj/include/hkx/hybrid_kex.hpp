#pragma once

#include <array>

#include "hkx/bytes.hpp"
#include "hkx/crypto/rng.hpp"
#include "hkx/suites.hpp"

namespace hkx {

struct HybridPublicBundle {
    uint16_t suite_id = 0;
    Bytes classical_pub;
    Bytes pq_pub;
};

struct HybridCiphertextBundle {
    uint16_t suite_id = 0;
    Bytes classical_pub;  // responder's ephemeral public key
    Bytes pq_ct;
};

// Opaque private side of hybrid_keygen.
struct HybridPrivateState {
    uint16_t suite_id = 0;
    Bytes classical_priv;
    Bytes pq_priv;
};

struct SecretBundle {
    Bytes ecdh_ss;
    Bytes kem_ss;
    Bytes qkd_key;  // empty when QKD is disabled
};

struct SessionKeys {
    std::array<uint8_t, 32> enc_key{};
    std::array<uint8_t, 32> mac_key{};
};

struct HybridKeygenResult {
    HybridPublicBundle public_bundle;
    HybridPrivateState private_state;
};

struct HybridEncapsResult {
    HybridCiphertextBundle ciphertext;
    Bytes ecdh_ss;
    Bytes kem_ss;
};

struct HybridDecapsResult {
    Bytes ecdh_ss;
    Bytes kem_ss;
};

HybridKeygenResult hybrid_keygen(const HybridSuite& suite, crypto::RandomSource& rng);

// Encapsulates to the peer's bundle: fresh ephemeral ECDH key plus a KEM
// encapsulation. peer.suite_id must match the suite.
HybridEncapsResult hybrid_encapsulate(const HybridSuite& suite, const HybridPublicBundle& peer,
                                      crypto::RandomSource& rng);

// Length checks run before any primitive is invoked; a truncated bundle is a
// DecodeError, never a provider call.
HybridDecapsResult hybrid_decapsulate(const HybridSuite& suite, const HybridPrivateState& priv,
                                      const HybridCiphertextBundle& ct);

// ikm = ecdh_ss || kem_ss || qkd_key, exactly that order. The QKD component
// alone may be empty.
Bytes combine_secrets(const SecretBundle& bundle);

// ISO 18033-2 KDF2 over SHA-256: T(i) = SHA-256(z || I2OSP(i, 4)), counter
// starting at 1, output truncated to out_len.
Bytes kdf2_sha256(ByteSpan z, size_t out_len);

// okm = KDF2(ikm || transcript_hash, 64); enc_key = okm[0..32),
// mac_key = okm[32..64).
SessionKeys derive_session_keys(ByteSpan ikm, const std::array<uint8_t, 32>& transcript_hash);

}  // namespace hkx
