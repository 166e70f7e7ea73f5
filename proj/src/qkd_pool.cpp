#include "hkx/qkd/pool.hpp"

#include "hkx/crypto/hash.hpp"
#include "hkx/errors.hpp"
#include "hkx/hybrid_kex.hpp"

namespace hkx::qkd {

namespace {

Bytes tuple_bytes(const std::array<uint8_t, 32>& link_seed, uint64_t epoch, uint32_t index) {
    Bytes out(link_seed.begin(), link_seed.end());
    auto e = u64_be(epoch);
    append(out, e);
    auto i = u32_be(index);
    append(out, i);
    return out;
}

KeyId derive_key_id(const Bytes& tuple) {
    Bytes input = concat({as_span("hkx-qkd-key-id/"), tuple});
    auto digest = crypto::sha256(input);
    KeyId id{};
    std::copy(digest.begin(), digest.begin() + 16, id.begin());
    id[6] = static_cast<uint8_t>((id[6] & 0x0f) | 0x50);  // version 5
    id[8] = static_cast<uint8_t>((id[8] & 0x3f) | 0x80);  // RFC 4122 variant
    return id;
}

}  // namespace

std::vector<QkdKey> sim_generate_pool(const std::array<uint8_t, 32>& link_seed, uint64_t epoch,
                                      size_t count, unsigned key_size_bits) {
    if (count < 1) throw Error("qkd pool: count must be at least 1");
    if (key_size_bits == 0 || key_size_bits % 8 != 0) {
        throw Error("qkd pool: key size must be a positive multiple of 8 bits");
    }
    std::vector<QkdKey> keys;
    keys.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        Bytes tuple = tuple_bytes(link_seed, epoch, i);
        QkdKey key;
        key.key = kdf2_sha256(tuple, key_size_bits / 8);
        key.key_id = derive_key_id(tuple);
        key.epoch = epoch;
        keys.push_back(std::move(key));
    }
    return keys;
}

EpochPool::EpochPool(const std::array<uint8_t, 32>& link_seed, uint64_t epoch, size_t count,
                     unsigned key_size_bits)
    : link_seed_(link_seed), epoch_(epoch), count_(count), key_size_bits_(key_size_bits) {
    regenerate();
}

void EpochPool::regenerate() {
    slots_.clear();
    for (auto& key : sim_generate_pool(link_seed_, epoch_, count_, key_size_bits_)) {
        slots_.push_back({std::move(key), false, false});
    }
}

size_t EpochPool::stored_key_count() const {
    size_t used = 0;
    for (const auto& slot : slots_) {
        if (slot.master_delivered) ++used;
    }
    return slots_.size() - used;
}

std::optional<std::vector<QkdKey>> EpochPool::take_master(size_t number) {
    if (number > stored_key_count()) return std::nullopt;
    std::vector<QkdKey> out;
    out.reserve(number);
    for (auto& slot : slots_) {
        if (out.size() == number) break;
        if (slot.master_delivered) continue;
        slot.master_delivered = true;
        out.push_back(slot.key);
    }
    return out;
}

std::optional<QkdKey> EpochPool::take_slave(const KeyId& id) {
    for (auto& slot : slots_) {
        if (slot.key.key_id != id) continue;
        if (slot.slave_delivered) throw QkdError("already consumed");
        slot.slave_delivered = true;
        return slot.key;
    }
    return std::nullopt;
}

void EpochPool::advance_epoch() {
    ++epoch_;
    regenerate();
}

}  // namespace hkx::qkd
