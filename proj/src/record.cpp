#include "hkx/handshake/record.hpp"

#include <limits>

#include "hkx/crypto/aead.hpp"
#include "hkx/errors.hpp"

namespace hkx::handshake {

namespace {
constexpr std::array<uint8_t, 4> kInitiatorTag{'I', '2', 'R', 0};
constexpr std::array<uint8_t, 4> kResponderTag{'R', '2', 'I', 0};

std::array<uint8_t, 12> make_nonce(const std::array<uint8_t, 4>& tag, uint64_t counter) {
    std::array<uint8_t, 12> nonce{};
    std::copy(tag.begin(), tag.end(), nonce.begin());
    auto ctr = u64_be(counter);
    std::copy(ctr.begin(), ctr.end(), nonce.begin() + 4);
    return nonce;
}
}  // namespace

RecordChannel::RecordChannel(const SessionKeys& keys, Role role, uint64_t start_counter)
    : key_(keys.enc_key),
      send_tag_(role == Role::initiator ? kInitiatorTag : kResponderTag),
      recv_tag_(role == Role::initiator ? kResponderTag : kInitiatorTag),
      send_counter_(start_counter),
      recv_counter_(start_counter) {}

Bytes RecordChannel::seal(ByteSpan plaintext) {
    if (send_counter_ == std::numeric_limits<uint64_t>::max()) {
        throw SessionExpired("record send counter exhausted");
    }
    auto nonce = make_nonce(send_tag_, send_counter_);
    Bytes out = crypto::aes256gcm_seal(key_, nonce, {}, plaintext);
    ++send_counter_;
    return out;
}

Bytes RecordChannel::open(ByteSpan record) {
    if (recv_counter_ == std::numeric_limits<uint64_t>::max()) {
        throw SessionExpired("record receive counter exhausted");
    }
    auto nonce = make_nonce(recv_tag_, recv_counter_);
    Bytes out = crypto::aes256gcm_open(key_, nonce, {}, record);
    ++recv_counter_;
    return out;
}

}  // namespace hkx::handshake
