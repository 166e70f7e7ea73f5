#include <memory>

#include "hkx/crypto/hash.hpp"
#include "hkx/crypto/kem.hpp"
#include "hkx/crypto/sig.hpp"
#include "hkx/errors.hpp"

namespace hkx::crypto {

namespace {

constexpr size_t kSeedBytes = 32;

// Counter-mode SHA-256 expansion with a domain label. Local to the model
// backend; the production KDF2 lives in hybrid_kex and stays independent.
Bytes expand(std::string_view label, std::initializer_list<ByteSpan> parts, size_t out_len) {
    Bytes input;
    append(input, as_span(label));
    for (auto p : parts) append(input, p);
    Bytes out;
    out.reserve(out_len);
    uint32_t counter = 1;
    while (out.size() < out_len) {
        Bytes block = input;
        auto ctr = u32_be(counter++);
        append(block, ctr);
        auto digest = sha256(block);
        size_t take = std::min(out_len - out.size(), digest.size());
        out.insert(out.end(), digest.begin(), digest.begin() + static_cast<ptrdiff_t>(take));
    }
    return out;
}

class ModelKem final : public KemProvider {
public:
    ModelKem(std::string name, size_t pk_len, size_t ct_len, size_t ss_len)
        : name_(std::move(name)), pk_len_(pk_len), ct_len_(ct_len), ss_len_(ss_len) {
        if (ct_len_ < kSeedBytes) throw ProviderError(name_ + ": ciphertext too short to model");
    }

    std::string name() const override { return name_; }
    size_t public_key_bytes() const override { return pk_len_; }
    size_t ciphertext_bytes() const override { return ct_len_; }
    size_t shared_secret_bytes() const override { return ss_len_; }

    KemKeypair keygen(RandomSource& rng) const override {
        Bytes seed = rng.bytes(kSeedBytes);
        Bytes z = rng.bytes(kSeedBytes);
        Bytes pk = expand("hkx-model-kem-pk/", {as_span(name_), seed}, pk_len_);
        // Private key keeps the public key so decapsulation needs no re-expansion.
        Bytes sk = concat({seed, z, pk});
        return {std::move(pk), std::move(sk)};
    }

    KemEncapsulation encapsulate(ByteSpan public_key, RandomSource& rng) const override {
        if (public_key.size() != pk_len_) throw ProviderError(name_ + ": bad public key length");
        Bytes m = rng.bytes(kSeedBytes);
        auto pk_hash = sha256(public_key);
        auto pad = sha256(concat({as_span("hkx-model-kem-pad/"), as_span(name_), public_key}));
        Bytes ct(ct_len_);
        for (size_t i = 0; i < kSeedBytes; ++i) ct[i] = m[i] ^ pad[i];
        // Remaining bytes commit to m; decapsulation re-derives and compares
        // them, the same role re-encryption plays in an FO transform.
        Bytes commit = expand("hkx-model-kem-ct/", {as_span(name_), pk_hash, m}, ct_len_ - kSeedBytes);
        std::copy(commit.begin(), commit.end(), ct.begin() + kSeedBytes);
        Bytes ss = expand("hkx-model-kem-ss/", {as_span(name_), pk_hash, m}, ss_len_);
        return {std::move(ct), std::move(ss)};
    }

    Bytes decapsulate(ByteSpan private_key, ByteSpan ciphertext) const override {
        if (private_key.size() != 2 * kSeedBytes + pk_len_) {
            throw ProviderError(name_ + ": bad private key length");
        }
        if (ciphertext.size() != ct_len_) throw ProviderError(name_ + ": bad ciphertext length");
        ByteSpan z = private_key.subspan(kSeedBytes, kSeedBytes);
        ByteSpan pk = private_key.subspan(2 * kSeedBytes);
        auto pk_hash = sha256(pk);
        auto pad = sha256(concat({as_span("hkx-model-kem-pad/"), as_span(name_), pk}));
        Bytes m(kSeedBytes);
        for (size_t i = 0; i < kSeedBytes; ++i) m[i] = ciphertext[i] ^ pad[i];
        Bytes commit = expand("hkx-model-kem-ct/", {as_span(name_), pk_hash, m}, ct_len_ - kSeedBytes);
        if (!ct_equal(commit, ciphertext.subspan(kSeedBytes))) {
            // Implicit rejection: pseudorandom secret bound to z and the
            // received ciphertext, never an error.
            auto ct_hash = sha256(ciphertext);
            return expand("hkx-model-kem-rej/", {as_span(name_), z, ct_hash}, ss_len_);
        }
        return expand("hkx-model-kem-ss/", {as_span(name_), pk_hash, m}, ss_len_);
    }

private:
    std::string name_;
    size_t pk_len_;
    size_t ct_len_;
    size_t ss_len_;
};

constexpr size_t kMldsaSigningBytes = 4032;    // FIPS 204 ML-DSA-65 table
constexpr size_t kMldsaVerifyingBytes = 1952;
constexpr size_t kMldsaSignatureBytes = 3309;

class ModelMlDsa65 final : public SignatureProvider {
public:
    std::string name() const override { return "ml-dsa-65"; }
    size_t signing_key_bytes() const override { return kMldsaSigningBytes; }
    size_t verifying_key_bytes() const override { return kMldsaVerifyingBytes; }
    size_t signature_bytes() const override { return kMldsaSignatureBytes; }

    SigKeypair keygen(RandomSource& rng) const override {
        Bytes seed = rng.bytes(kSeedBytes);
        SigKeypair kp;
        kp.verifying_key = expand("hkx-model-sig-vk/", {seed}, kMldsaVerifyingBytes);
        Bytes fill = expand("hkx-model-sig-sk/", {seed}, kMldsaSigningBytes - kSeedBytes);
        kp.signing_key = concat({seed, fill});
        return kp;
    }

    Bytes sign(ByteSpan signing_key, ByteSpan message) const override {
        if (signing_key.size() != kMldsaSigningBytes) {
            throw ProviderError("ml-dsa-65: bad signing key length");
        }
        ByteSpan seed = signing_key.subspan(0, kSeedBytes);
        Bytes vk = expand("hkx-model-sig-vk/", {seed}, kMldsaVerifyingBytes);
        return signature_for(vk, message);
    }

    bool verify(ByteSpan verifying_key, ByteSpan message, ByteSpan signature) const override {
        if (verifying_key.size() != kMldsaVerifyingBytes) return false;
        if (signature.size() != kMldsaSignatureBytes) return false;
        Bytes expected = signature_for(verifying_key, message);
        return ct_equal(expected, signature);
    }

private:
    static Bytes signature_for(ByteSpan vk, ByteSpan message) {
        auto vk_hash = sha256(vk);
        auto msg_hash = sha256(message);
        return expand("hkx-model-sig-sig/", {vk_hash, msg_hash}, kMldsaSignatureBytes);
    }
};

}  // namespace

std::unique_ptr<KemProvider> make_model_kem(std::string name, size_t public_key_bytes,
                                            size_t ciphertext_bytes, size_t shared_secret_bytes) {
    return std::make_unique<ModelKem>(std::move(name), public_key_bytes, ciphertext_bytes,
                                      shared_secret_bytes);
}

std::unique_ptr<SignatureProvider> make_mldsa65() { return std::make_unique<ModelMlDsa65>(); }

}  // namespace hkx::crypto
