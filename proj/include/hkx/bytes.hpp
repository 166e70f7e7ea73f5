#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hkx {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

std::string hex_encode(ByteSpan data);
Bytes hex_decode(std::string_view hex);  // throws DecodeError on odd length / bad digit

std::string base64_encode(ByteSpan data);
Bytes base64_decode(std::string_view b64);  // throws DecodeError

// Constant-time equality; false when lengths differ.
bool ct_equal(ByteSpan a, ByteSpan b);

// Big-endian integer-to-octet-string (I2OSP).
void put_u32_be(Bytes& out, uint32_t v);
void put_u64_be(Bytes& out, uint64_t v);
std::array<uint8_t, 4> u32_be(uint32_t v);
std::array<uint8_t, 8> u64_be(uint64_t v);
uint32_t read_u32_be(ByteSpan in);  // in.size() >= 4

inline void append(Bytes& out, ByteSpan data) {
    out.insert(out.end(), data.begin(), data.end());
}

inline Bytes concat(std::initializer_list<ByteSpan> parts) {
    Bytes out;
    size_t total = 0;
    for (auto p : parts) total += p.size();
    out.reserve(total);
    for (auto p : parts) append(out, p);
    return out;
}

inline ByteSpan as_span(std::string_view s) {
    return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

}  // namespace hkx
