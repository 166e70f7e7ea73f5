#include "hkx/crypto/rng.hpp"

#include <openssl/rand.h>

#include <cstring>

#include "hkx/crypto/hash.hpp"
#include "hkx/errors.hpp"

namespace hkx::crypto {

void SystemRng::fill(std::span<uint8_t> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
        throw ProviderError("system rng: RAND_bytes failed");
    }
}

DeterministicRng::DeterministicRng(ByteSpan seed) : seed_(seed.begin(), seed.end()) {}

void DeterministicRng::fill(std::span<uint8_t> out) {
    size_t produced = 0;
    while (produced < out.size()) {
        if (buffer_pos_ == buffer_.size()) {
            Bytes block = seed_;
            auto ctr = u64_be(counter_++);
            append(block, ctr);
            auto digest = sha256(block);
            buffer_.assign(digest.begin(), digest.end());
            buffer_pos_ = 0;
        }
        size_t take = std::min(out.size() - produced, buffer_.size() - buffer_pos_);
        std::memcpy(out.data() + produced, buffer_.data() + buffer_pos_, take);
        produced += take;
        buffer_pos_ += take;
    }
}

}  // namespace hkx::crypto
