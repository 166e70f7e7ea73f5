#pragma once

#include <memory>

#include "hkx/bytes.hpp"

namespace hkx::crypto {

// Source of randomness. Protocol code always takes one explicitly so every
// operation is reproducible under a fixed seed.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<uint8_t> out) = 0;

    Bytes bytes(size_t n) {
        Bytes out(n);
        fill(out);
        return out;
    }
};

// OS-backed randomness.
class SystemRng final : public RandomSource {
public:
    void fill(std::span<uint8_t> out) override;
};

// SHA-256 counter stream seeded from a caller-supplied value. Test and
// key-file tooling use this; identical seeds give identical streams.
class DeterministicRng final : public RandomSource {
public:
    explicit DeterministicRng(ByteSpan seed);
    void fill(std::span<uint8_t> out) override;

private:
    Bytes seed_;
    uint64_t counter_ = 0;
    Bytes buffer_;
    size_t buffer_pos_ = 0;
};

}  // namespace hkx::crypto
