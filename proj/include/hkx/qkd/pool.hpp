#pragma once

#include <optional>
#include <vector>

#include "hkx/qkd/types.hpp"

namespace hkx::qkd {

// Per-key delivery flags: each side may take a key exactly once.
struct KeySlot {
    QkdKey key;
    bool master_delivered = false;
    bool slave_delivered = false;
};

// Deterministic key pool standing in for the shared quantum channel: two
// processes configured with the same (link_seed, epoch) regenerate identical
// key bytes and key ids without any coordination.
class EpochPool {
public:
    EpochPool(const std::array<uint8_t, 32>& link_seed, uint64_t epoch, size_t count,
              unsigned key_size_bits);

    uint64_t epoch() const { return epoch_; }
    size_t count() const { return slots_.size(); }
    unsigned key_size_bits() const { return key_size_bits_; }

    // count minus master-delivered keys.
    size_t stored_key_count() const;

    const std::vector<KeySlot>& slots() const { return slots_; }

    // Takes the next `number` keys not yet delivered to the master side and
    // marks them. Returns nullopt when fewer remain.
    std::optional<std::vector<QkdKey>> take_master(size_t number);

    // Looks up one key for the slave side and marks it delivered.
    // Returns nullopt when the id is not in this epoch's pool; throws
    // QkdError("already consumed") on a repeated take.
    std::optional<QkdKey> take_slave(const KeyId& id);

    // Replaces the pool with a freshly generated epoch+1 pool; keys from the
    // old epoch become unavailable.
    void advance_epoch();

private:
    void regenerate();

    std::array<uint8_t, 32> link_seed_;
    uint64_t epoch_;
    size_t count_;
    unsigned key_size_bits_;
    std::vector<KeySlot> slots_;
};

// key i = KDF2(link_seed || I2OSP(epoch, 8) || I2OSP(i, 4), size_bits / 8);
// key_id = name-based digest of the same tuple with version/variant bits set.
std::vector<QkdKey> sim_generate_pool(const std::array<uint8_t, 32>& link_seed, uint64_t epoch,
                                      size_t count, unsigned key_size_bits);

}  // namespace hkx::qkd
