#include "hkx/qkd/types.hpp"

#include "hkx/errors.hpp"

namespace hkx::qkd {

std::string uuid_to_string(const KeyId& id) {
    std::string hex = hex_encode(id);
    std::string out;
    out.reserve(36);
    out.append(hex, 0, 8);
    out.push_back('-');
    out.append(hex, 8, 4);
    out.push_back('-');
    out.append(hex, 12, 4);
    out.push_back('-');
    out.append(hex, 16, 4);
    out.push_back('-');
    out.append(hex, 20, 12);
    return out;
}

KeyId uuid_from_string(std::string_view text) {
    if (text.size() != 36 || text[8] != '-' || text[13] != '-' || text[18] != '-' ||
        text[23] != '-') {
        throw DecodeError("malformed uuid");
    }
    std::string hex;
    hex.reserve(32);
    for (size_t i = 0; i < text.size(); ++i) {
        if (i == 8 || i == 13 || i == 18 || i == 23) continue;
        hex.push_back(text[i]);
    }
    Bytes raw = hex_decode(hex);
    KeyId id{};
    std::copy(raw.begin(), raw.end(), id.begin());
    return id;
}

}  // namespace hkx::qkd
