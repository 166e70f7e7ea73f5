#pragma once

#include "hkx/hybrid_kex.hpp"

namespace hkx::handshake {

enum class Role { initiator, responder };

// AES-256-GCM record protection over established session keys. Nonce is a
// 4-byte direction tag followed by a big-endian 8-byte counter; the receiver
// tracks its own expected counter, so replayed or reordered records fail
// authentication.
class RecordChannel {
public:
    // start_counter exists for nonce-exhaustion tests; production channels
    // start at zero.
    RecordChannel(const SessionKeys& keys, Role role, uint64_t start_counter = 0);

    // Throws SessionExpired once the send counter space is exhausted.
    Bytes seal(ByteSpan plaintext);

    // Throws RecordError on tamper, replay, or reorder.
    Bytes open(ByteSpan record);

    uint64_t sent() const { return send_counter_; }
    uint64_t received() const { return recv_counter_; }

private:
    std::array<uint8_t, 32> key_;
    std::array<uint8_t, 4> send_tag_;
    std::array<uint8_t, 4> recv_tag_;
    uint64_t send_counter_;
    uint64_t recv_counter_;
};

}  // namespace hkx::handshake
