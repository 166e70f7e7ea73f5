#include "hkx/crypto/aead.hpp"

#include <openssl/evp.h>

#include <memory>

#include "hkx/errors.hpp"

namespace hkx::crypto {

namespace {

struct CipherCtxFree {
    void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;

void check_params(ByteSpan key, ByteSpan nonce) {
    if (key.size() != kAes256KeyBytes) throw ProviderError("aes-256-gcm: bad key length");
    if (nonce.size() != kGcmNonceBytes) throw ProviderError("aes-256-gcm: bad nonce length");
}

}  // namespace

Bytes aes256gcm_seal(ByteSpan key, ByteSpan nonce, ByteSpan aad, ByteSpan plaintext) {
    check_params(key, nonce);
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw ProviderError("aes-256-gcm: ctx alloc failed");

    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1) {
        throw ProviderError("aes-256-gcm: encrypt init failed");
    }
    int len = 0;
    if (!aad.empty() &&
        EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
        throw ProviderError("aes-256-gcm: aad failed");
    }
    Bytes out(plaintext.size() + kGcmTagBytes);
    if (!plaintext.empty() &&
        EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1) {
        throw ProviderError("aes-256-gcm: encrypt failed");
    }
    int fin = 0;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + plaintext.size(), &fin) != 1) {
        throw ProviderError("aes-256-gcm: encrypt final failed");
    }
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kGcmTagBytes,
                            out.data() + plaintext.size()) != 1) {
        throw ProviderError("aes-256-gcm: tag extraction failed");
    }
    return out;
}

Bytes aes256gcm_open(ByteSpan key, ByteSpan nonce, ByteSpan aad, ByteSpan sealed) {
    check_params(key, nonce);
    if (sealed.size() < kGcmTagBytes) throw RecordError("record too short for tag");
    size_t ct_len = sealed.size() - kGcmTagBytes;

    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw ProviderError("aes-256-gcm: ctx alloc failed");
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1) {
        throw ProviderError("aes-256-gcm: decrypt init failed");
    }
    int len = 0;
    if (!aad.empty() &&
        EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
        throw ProviderError("aes-256-gcm: aad failed");
    }
    Bytes out(ct_len);
    if (ct_len > 0 &&
        EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(), static_cast<int>(ct_len)) != 1) {
        throw RecordError("record decryption failed");
    }
    Bytes tag(sealed.begin() + static_cast<ptrdiff_t>(ct_len), sealed.end());
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kGcmTagBytes, tag.data()) != 1) {
        throw ProviderError("aes-256-gcm: tag set failed");
    }
    int fin = 0;
    if (EVP_DecryptFinal_ex(ctx.get(), out.data() + ct_len, &fin) != 1) {
        throw RecordError("record authentication failed");
    }
    return out;
}

}  // namespace hkx::crypto
