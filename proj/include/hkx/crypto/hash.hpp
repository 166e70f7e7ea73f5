#pragma once

#include <array>

#include "hkx/bytes.hpp"

namespace hkx::crypto {

constexpr size_t kSha256Bytes = 32;

using Digest = std::array<uint8_t, kSha256Bytes>;

Digest sha256(ByteSpan data);

// Incremental SHA-256; used for handshake transcripts.
class Sha256 {
public:
    Sha256();
    Sha256(const Sha256& other);
    Sha256& operator=(const Sha256& other);
    ~Sha256();

    void update(ByteSpan data);
    // Digest of everything absorbed so far; the stream stays usable.
    Digest peek() const;
    Digest finish();

private:
    void* ctx_;  // EVP_MD_CTX
};

Digest hmac_sha256(ByteSpan key, ByteSpan data);

}  // namespace hkx::crypto
