#include <openssl/evp.h>

#include <memory>

#include "hkx/crypto/ecdh.hpp"
#include "hkx/errors.hpp"

namespace hkx::crypto {

namespace {

struct PkeyFree {
    void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
};
struct PkeyCtxFree {
    void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
};
using Pkey = std::unique_ptr<EVP_PKEY, PkeyFree>;
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxFree>;

class OpensslEcdh final : public EcdhProvider {
public:
    OpensslEcdh(int nid, std::string name, size_t key_bytes)
        : nid_(nid), name_(std::move(name)), key_bytes_(key_bytes) {}

    std::string name() const override { return name_; }
    size_t public_key_bytes() const override { return key_bytes_; }
    size_t shared_secret_bytes() const override { return key_bytes_; }

    EcdhKeypair keygen(RandomSource& rng) const override {
        // Private scalar comes from the caller's randomness source so keygen
        // is reproducible under a seeded rng; clamping happens inside OpenSSL.
        EcdhKeypair kp;
        kp.private_key = rng.bytes(key_bytes_);
        Pkey key(EVP_PKEY_new_raw_private_key(nid_, nullptr, kp.private_key.data(),
                                              kp.private_key.size()));
        if (!key) throw ProviderError(name_ + ": private key rejected");
        kp.public_key.resize(key_bytes_);
        size_t len = key_bytes_;
        if (EVP_PKEY_get_raw_public_key(key.get(), kp.public_key.data(), &len) != 1 ||
            len != key_bytes_) {
            throw ProviderError(name_ + ": public key derivation failed");
        }
        return kp;
    }

    Bytes shared_secret(ByteSpan private_key, ByteSpan peer_public) const override {
        if (private_key.size() != key_bytes_) throw ProviderError(name_ + ": bad private key length");
        if (peer_public.size() != key_bytes_) throw ProviderError(name_ + ": bad peer key length");
        Pkey own(EVP_PKEY_new_raw_private_key(nid_, nullptr, private_key.data(),
                                              private_key.size()));
        Pkey peer(EVP_PKEY_new_raw_public_key(nid_, nullptr, peer_public.data(),
                                              peer_public.size()));
        if (!own || !peer) throw ProviderError(name_ + ": key import failed");
        PkeyCtx ctx(EVP_PKEY_CTX_new(own.get(), nullptr));
        if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
            EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1) {
            throw ProviderError(name_ + ": derive setup failed");
        }
        Bytes out(key_bytes_);
        size_t len = key_bytes_;
        if (EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1 || len != key_bytes_) {
            // OpenSSL rejects low-order peer points (all-zero output) here.
            throw ProviderError(name_ + ": shared secret derivation failed");
        }
        return out;
    }

private:
    int nid_;
    std::string name_;
    size_t key_bytes_;
};

}  // namespace

std::unique_ptr<EcdhProvider> make_x25519() {
    return std::make_unique<OpensslEcdh>(EVP_PKEY_X25519, "x25519", 32);
}

std::unique_ptr<EcdhProvider> make_x448() {
    return std::make_unique<OpensslEcdh>(EVP_PKEY_X448, "x448", 56);
}

}  // namespace hkx::crypto
