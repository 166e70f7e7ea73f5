#include "hkx/dual_sig.hpp"

#include "hkx/crypto/sig.hpp"
#include "hkx/errors.hpp"

namespace hkx {

namespace {

const crypto::SignatureProvider& classical_provider() {
    static const auto p = crypto::make_ed25519();
    return *p;
}

const crypto::SignatureProvider& pq_provider() {
    static const auto p = crypto::make_mldsa65();
    return *p;
}

}  // namespace

DualKeypair dual_keygen(crypto::RandomSource& rng) {
    auto classical = classical_provider().keygen(rng);
    auto pq = pq_provider().keygen(rng);
    return {std::move(classical.signing_key), std::move(classical.verifying_key),
            std::move(pq.signing_key), std::move(pq.verifying_key)};
}

DualVerifyingKeys verifying_keys(const DualKeypair& kp) {
    return {kp.classical_verifying, kp.pq_verifying};
}

DualSignature dual_sign(const DualKeypair& kp, ByteSpan message) {
    return {classical_provider().sign(kp.classical_signing, message),
            pq_provider().sign(kp.pq_signing, message)};
}

bool dual_verify(const DualVerifyingKeys& keys, ByteSpan message, const DualSignature& sig) {
    // Bitwise AND keeps both component checks unconditional.
    bool classical_ok = classical_provider().verify(keys.classical, message, sig.classical_sig);
    bool pq_ok = pq_provider().verify(keys.pq, message, sig.pq_sig);
    return classical_ok & pq_ok;
}

Bytes encode_dual_signature(const DualSignature& sig) {
    if (sig.classical_sig.size() != kClassicalSigBytes || sig.pq_sig.size() != kPqSigBytes) {
        throw DecodeError("dual signature components have wrong lengths");
    }
    return concat({sig.classical_sig, sig.pq_sig});
}

DualSignature decode_dual_signature(ByteSpan encoded) {
    if (encoded.size() != kDualSigBytes) {
        throw DecodeError("dual signature encoding must be " + std::to_string(kDualSigBytes) +
                          " bytes, got " + std::to_string(encoded.size()));
    }
    DualSignature sig;
    sig.classical_sig.assign(encoded.begin(), encoded.begin() + kClassicalSigBytes);
    sig.pq_sig.assign(encoded.begin() + kClassicalSigBytes, encoded.end());
    return sig;
}

}  // namespace hkx
