#include <openssl/evp.h>

#include <memory>

#include "hkx/crypto/sig.hpp"
#include "hkx/errors.hpp"

namespace hkx::crypto {

namespace {

struct PkeyFree {
    void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
};
struct MdCtxFree {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using Pkey = std::unique_ptr<EVP_PKEY, PkeyFree>;
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxFree>;

constexpr size_t kEdSeedBytes = 32;
constexpr size_t kEdPubBytes = 32;
constexpr size_t kEdSigBytes = 64;

class Ed25519Provider final : public SignatureProvider {
public:
    std::string name() const override { return "ed25519"; }
    size_t signing_key_bytes() const override { return kEdSeedBytes; }
    size_t verifying_key_bytes() const override { return kEdPubBytes; }
    size_t signature_bytes() const override { return kEdSigBytes; }

    SigKeypair keygen(RandomSource& rng) const override {
        SigKeypair kp;
        kp.signing_key = rng.bytes(kEdSeedBytes);
        Pkey key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, kp.signing_key.data(),
                                              kp.signing_key.size()));
        if (!key) throw ProviderError("ed25519: private key rejected");
        kp.verifying_key.resize(kEdPubBytes);
        size_t len = kEdPubBytes;
        if (EVP_PKEY_get_raw_public_key(key.get(), kp.verifying_key.data(), &len) != 1 ||
            len != kEdPubBytes) {
            throw ProviderError("ed25519: public key derivation failed");
        }
        return kp;
    }

    Bytes sign(ByteSpan signing_key, ByteSpan message) const override {
        if (signing_key.size() != kEdSeedBytes) throw ProviderError("ed25519: bad signing key length");
        Pkey key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, signing_key.data(),
                                              signing_key.size()));
        if (!key) throw ProviderError("ed25519: key import failed");
        MdCtx ctx(EVP_MD_CTX_new());
        if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) {
            throw ProviderError("ed25519: sign init failed");
        }
        Bytes sig(kEdSigBytes);
        size_t len = kEdSigBytes;
        if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1 ||
            len != kEdSigBytes) {
            throw ProviderError("ed25519: signing failed");
        }
        return sig;
    }

    bool verify(ByteSpan verifying_key, ByteSpan message, ByteSpan signature) const override {
        if (verifying_key.size() != kEdPubBytes || signature.size() != kEdSigBytes) return false;
        Pkey key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, verifying_key.data(),
                                             verifying_key.size()));
        if (!key) return false;
        MdCtx ctx(EVP_MD_CTX_new());
        if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) {
            return false;
        }
        return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(),
                                message.size()) == 1;
    }
};

}  // namespace

std::unique_ptr<SignatureProvider> make_ed25519() { return std::make_unique<Ed25519Provider>(); }

}  // namespace hkx::crypto
