#pragma once

#include "hkx/bytes.hpp"

namespace hkx::crypto {

constexpr size_t kAes256KeyBytes = 32;
constexpr size_t kGcmNonceBytes = 12;
constexpr size_t kGcmTagBytes = 16;

// AES-256-GCM. Output is ciphertext followed by the 16-byte tag.
Bytes aes256gcm_seal(ByteSpan key, ByteSpan nonce, ByteSpan aad, ByteSpan plaintext);

// Throws RecordError on tag failure.
Bytes aes256gcm_open(ByteSpan key, ByteSpan nonce, ByteSpan aad, ByteSpan sealed);

}  // namespace hkx::crypto
