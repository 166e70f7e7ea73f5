#include "hkx/hybrid_kex.hpp"

#include <algorithm>

#include "hkx/crypto/hash.hpp"
#include "hkx/errors.hpp"

namespace hkx {

HybridKeygenResult hybrid_keygen(const HybridSuite& suite, crypto::RandomSource& rng) {
    const auto& ecdh = ecdh_for(suite.classical.id);
    const auto& kem = kem_for(suite.pq.id);

    auto classical = ecdh.keygen(rng);
    auto pq = kem.keygen(rng);

    HybridKeygenResult out;
    out.public_bundle.suite_id = suite.id;
    out.public_bundle.classical_pub = std::move(classical.public_key);
    out.public_bundle.pq_pub = std::move(pq.public_key);
    out.private_state.suite_id = suite.id;
    out.private_state.classical_priv = std::move(classical.private_key);
    out.private_state.pq_priv = std::move(pq.private_key);
    return out;
}

HybridEncapsResult hybrid_encapsulate(const HybridSuite& suite, const HybridPublicBundle& peer,
                                      crypto::RandomSource& rng) {
    if (peer.suite_id != suite.id) {
        throw DecodeError("peer bundle suite id " + std::to_string(peer.suite_id) +
                          " does not match suite " + std::to_string(suite.id));
    }
    auto profile = size_profile(suite);
    if (peer.classical_pub.size() != profile.classical_pk) {
        throw DecodeError("peer classical public key has wrong length");
    }
    if (peer.pq_pub.size() != profile.pq_pk) {
        throw DecodeError("peer kem public key has wrong length");
    }

    const auto& ecdh = ecdh_for(suite.classical.id);
    const auto& kem = kem_for(suite.pq.id);

    auto own = ecdh.keygen(rng);
    HybridEncapsResult out;
    out.ecdh_ss = ecdh.shared_secret(own.private_key, peer.classical_pub);
    auto enc = kem.encapsulate(peer.pq_pub, rng);
    out.kem_ss = std::move(enc.shared_secret);
    out.ciphertext.suite_id = suite.id;
    out.ciphertext.classical_pub = std::move(own.public_key);
    out.ciphertext.pq_ct = std::move(enc.ciphertext);
    return out;
}

HybridDecapsResult hybrid_decapsulate(const HybridSuite& suite, const HybridPrivateState& priv,
                                      const HybridCiphertextBundle& ct) {
    if (ct.suite_id != suite.id || priv.suite_id != suite.id) {
        throw DecodeError("ciphertext bundle suite id mismatch");
    }
    auto profile = size_profile(suite);
    if (ct.classical_pub.size() != profile.classical_pk) {
        throw DecodeError("ciphertext classical key has wrong length");
    }
    if (ct.pq_ct.size() != profile.pq_ct) {
        throw DecodeError("kem ciphertext has wrong length");
    }

    const auto& ecdh = ecdh_for(suite.classical.id);
    const auto& kem = kem_for(suite.pq.id);

    HybridDecapsResult out;
    out.ecdh_ss = ecdh.shared_secret(priv.classical_priv, ct.classical_pub);
    out.kem_ss = kem.decapsulate(priv.pq_priv, ct.pq_ct);
    return out;
}

Bytes combine_secrets(const SecretBundle& bundle) {
    if (bundle.ecdh_ss.empty()) throw Error("combine_secrets: ecdh component is empty");
    if (bundle.kem_ss.empty()) throw Error("combine_secrets: kem component is empty");
    return concat({bundle.ecdh_ss, bundle.kem_ss, bundle.qkd_key});
}

Bytes kdf2_sha256(ByteSpan z, size_t out_len) {
    constexpr uint64_t kMaxOutput = uint64_t{0xFFFFFFFF} * crypto::kSha256Bytes;
    if (out_len > kMaxOutput) throw Error("kdf2: requested output too long");
    Bytes out;
    out.reserve(out_len);
    uint32_t counter = 1;
    while (out.size() < out_len) {
        Bytes block(z.begin(), z.end());
        auto ctr = u32_be(counter++);
        append(block, ctr);
        auto digest = crypto::sha256(block);
        size_t take = std::min(out_len - out.size(), digest.size());
        out.insert(out.end(), digest.begin(), digest.begin() + static_cast<ptrdiff_t>(take));
    }
    return out;
}

SessionKeys derive_session_keys(ByteSpan ikm, const std::array<uint8_t, 32>& transcript_hash) {
    if (ikm.empty()) throw Error("derive_session_keys: empty input keying material");
    Bytes seed(ikm.begin(), ikm.end());
    append(seed, transcript_hash);
    Bytes okm = kdf2_sha256(seed, 64);
    SessionKeys keys;
    std::copy(okm.begin(), okm.begin() + 32, keys.enc_key.begin());
    std::copy(okm.begin() + 32, okm.end(), keys.mac_key.begin());
    return keys;
}

}  // namespace hkx
