#pragma once

#include <stdexcept>

#include "hkx/crypto/rng.hpp"

namespace testing {

// Replays exact bytes, for feeding known-answer keys through keygen paths.
class PlaybackRng final : public hkx::crypto::RandomSource {
public:
    explicit PlaybackRng(hkx::Bytes data) : data_(std::move(data)) {}

    void fill(std::span<uint8_t> out) override {
        if (pos_ + out.size() > data_.size()) throw std::runtime_error("playback exhausted");
        std::copy(data_.begin() + static_cast<ptrdiff_t>(pos_),
                  data_.begin() + static_cast<ptrdiff_t>(pos_ + out.size()), out.begin());
        pos_ += out.size();
    }

private:
    hkx::Bytes data_;
    size_t pos_ = 0;
};

}  // namespace testing
