#include "hkx/crypto/hash.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "hkx/errors.hpp"

namespace hkx::crypto {

Digest sha256(ByteSpan data) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != kSha256Bytes) {
        throw ProviderError("sha256: digest failed");
    }
    return out;
}

Sha256::Sha256() {
    auto* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw ProviderError("sha256: init failed");
    }
    ctx_ = ctx;
}

Sha256::Sha256(const Sha256& other) {
    auto* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_MD_CTX_copy_ex(ctx, static_cast<EVP_MD_CTX*>(other.ctx_)) != 1) {
        EVP_MD_CTX_free(ctx);
        throw ProviderError("sha256: copy failed");
    }
    ctx_ = ctx;
}

Sha256& Sha256::operator=(const Sha256& other) {
    if (this == &other) return *this;
    if (EVP_MD_CTX_copy_ex(static_cast<EVP_MD_CTX*>(ctx_),
                           static_cast<EVP_MD_CTX*>(other.ctx_)) != 1) {
        throw ProviderError("sha256: copy failed");
    }
    return *this;
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256::update(ByteSpan data) {
    if (EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size()) != 1) {
        throw ProviderError("sha256: update failed");
    }
}

Digest Sha256::peek() const {
    Sha256 copy(*this);
    return copy.finish();
}

Digest Sha256::finish() {
    Digest out{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), out.data(), &len) != 1 ||
        len != kSha256Bytes) {
        throw ProviderError("sha256: final failed");
    }
    return out;
}

Digest hmac_sha256(ByteSpan key, ByteSpan data) {
    Digest out{};
    unsigned int len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
              out.data(), &len) ||
        len != kSha256Bytes) {
        throw ProviderError("hmac-sha256: mac failed");
    }
    return out;
}

}  // namespace hkx::crypto
