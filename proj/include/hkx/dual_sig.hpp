#pragma once

#include "hkx/bytes.hpp"
#include "hkx/crypto/rng.hpp"

namespace hkx {

// Classical + post-quantum signature material used in parallel. Component
// lengths follow FIPS 186-5 (Ed25519) and FIPS 204 (ML-DSA-65).
struct DualKeypair {
    Bytes classical_signing;    // 32
    Bytes classical_verifying;  // 32
    Bytes pq_signing;           // 4032
    Bytes pq_verifying;         // 1952
};

struct DualVerifyingKeys {
    Bytes classical;  // 32
    Bytes pq;         // 1952
};

struct DualSignature {
    Bytes classical_sig;  // 64
    Bytes pq_sig;         // 3309
};

constexpr size_t kClassicalSigBytes = 64;
constexpr size_t kPqSigBytes = 3309;
constexpr size_t kDualSigBytes = kClassicalSigBytes + kPqSigBytes;

DualKeypair dual_keygen(crypto::RandomSource& rng);

DualVerifyingKeys verifying_keys(const DualKeypair& kp);

// Both components sign the same message bytes.
DualSignature dual_sign(const DualKeypair& kp, ByteSpan message);

// Accepts iff both components verify. Both verifications always run; a
// classical failure never short-circuits the post-quantum check.
bool dual_verify(const DualVerifyingKeys& keys, ByteSpan message, const DualSignature& sig);

// Wire form: classical_sig || pq_sig at fixed offsets.
Bytes encode_dual_signature(const DualSignature& sig);

// Throws DecodeError when the encoding length is wrong.
DualSignature decode_dual_signature(ByteSpan encoded);

}  // namespace hkx
