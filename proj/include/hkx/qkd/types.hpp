#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "hkx/bytes.hpp"

namespace hkx::qkd {

using KeyId = std::array<uint8_t, 16>;

// One key unit delivered by a KME.
struct QkdKey {
    KeyId key_id{};
    Bytes key;
    uint64_t epoch = 0;
};

// ETSI QKD 014 status document.
struct KmeStatus {
    std::string source_kme_id;
    std::string target_kme_id;
    std::string master_sae_id;
    std::string slave_sae_id;
    unsigned key_size = 0;  // bits
    size_t stored_key_count = 0;
    size_t max_key_count = 0;
    size_t max_key_per_request = 0;
};

// Canonical 8-4-4-4-12 lowercase form.
std::string uuid_to_string(const KeyId& id);

// Throws DecodeError on malformed input.
KeyId uuid_from_string(std::string_view text);

}  // namespace hkx::qkd
