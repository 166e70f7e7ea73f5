#pragma once

#include <optional>

#include "hkx/dual_sig.hpp"
#include "hkx/qkd/types.hpp"
#include "hkx/suites.hpp"

namespace hkx::handshake {

// Wire layout, all integers big-endian:
//   header: u8 flight_type | u8 version (=1) | u16 suite_id | u32 body_len
//   body:   length-prefixed (u32) fields in fixed order
// Flight 1 body: random(32) | classical_pub | pq_pub | u8 qkd_flag
//                [ | qkd_key_id(16) when flag=1 ] | dual_sig
// Flight 2 body: random(32) | classical_pub | pq_ct | dual_sig | confirm_mac(32)
// Flight 3 body: confirm_mac(32)
// The transcript runs over every byte up to (not including) a flight's
// dual_sig field; Flight 2's confirm_mac sits after the signature and stays
// outside the transcript.

constexpr uint8_t kWireVersion = 1;
constexpr size_t kFlightHeaderBytes = 8;
constexpr size_t kRandomBytes = 32;
constexpr size_t kConfirmMacBytes = 32;
constexpr size_t kMaxBodyBytes = 1 << 20;

enum class FlightType : uint8_t { flight1 = 1, flight2 = 2, flight3 = 3 };

struct FlightHeader {
    FlightType type;
    uint8_t version;
    uint16_t suite_id;
    uint32_t body_len;
};

// Parses and validates the fixed header (version, known type, length bound).
FlightHeader parse_flight_header(ByteSpan header);

struct Flight1 {
    uint16_t suite_id = 0;
    std::array<uint8_t, kRandomBytes> client_random{};
    Bytes classical_pub;
    Bytes pq_pub;
    std::optional<qkd::KeyId> qkd_key_id;
    DualSignature sig;
};

struct Flight2 {
    uint16_t suite_id = 0;
    std::array<uint8_t, kRandomBytes> server_random{};
    Bytes classical_pub;
    Bytes pq_ct;
    DualSignature sig;
    std::array<uint8_t, kConfirmMacBytes> confirm_mac{};
};

struct Flight3 {
    uint16_t suite_id = 0;
    std::array<uint8_t, kConfirmMacBytes> confirm_mac{};
};

// Everything before the signature field: header plus the signed body prefix.
// The caller absorbs this into the transcript, signs, then finishes.
Bytes encode_flight1_prefix(const Flight1& f1);
Bytes finish_flight1(Bytes prefix, const DualSignature& sig);

Bytes encode_flight2_prefix(const Flight2& f2);
Bytes finish_flight2(Bytes prefix, const DualSignature& sig,
                     const std::array<uint8_t, kConfirmMacBytes>& confirm_mac);

Bytes encode_flight3(const Flight3& f3);

// Decoded flight plus the length of its transcript-covered prefix.
template <typename FlightT>
struct Decoded {
    FlightT flight;
    size_t presig_len = 0;
};

// Decoders take the suite profile to enforce exact field lengths; every
// violation is a DecodeError and no partial result escapes.
Decoded<Flight1> decode_flight1(ByteSpan message, const SizeProfile& profile);
Decoded<Flight2> decode_flight2(ByteSpan message, const SizeProfile& profile);
Decoded<Flight3> decode_flight3(ByteSpan message);

}  // namespace hkx::handshake
