#include "hkx/handshake/wire.hpp"

#include "hkx/errors.hpp"

namespace hkx::handshake {

namespace {

void put_field(Bytes& out, ByteSpan field) {
    put_u32_be(out, static_cast<uint32_t>(field.size()));
    append(out, field);
}

Bytes make_header(FlightType type, uint16_t suite_id, size_t body_len) {
    if (body_len > kMaxBodyBytes) throw DecodeError("flight body too large to encode");
    Bytes out;
    out.reserve(kFlightHeaderBytes);
    out.push_back(static_cast<uint8_t>(type));
    out.push_back(kWireVersion);
    out.push_back(static_cast<uint8_t>(suite_id >> 8));
    out.push_back(static_cast<uint8_t>(suite_id));
    put_u32_be(out, static_cast<uint32_t>(body_len));
    return out;
}

constexpr size_t field_len(size_t payload) { return 4 + payload; }

class FieldReader {
public:
    explicit FieldReader(ByteSpan body) : body_(body) {}

    Bytes read_field(size_t expected_len, const char* what) {
        if (body_.size() < pos_ + 4) throw DecodeError(std::string("truncated length of ") + what);
        uint32_t len = read_u32_be(body_.subspan(pos_));
        pos_ += 4;
        if (len != expected_len) {
            throw DecodeError(std::string(what) + " has length " + std::to_string(len) +
                              ", expected " + std::to_string(expected_len));
        }
        if (body_.size() < pos_ + len) throw DecodeError(std::string("truncated ") + what);
        Bytes out(body_.begin() + static_cast<ptrdiff_t>(pos_),
                  body_.begin() + static_cast<ptrdiff_t>(pos_ + len));
        pos_ += len;
        return out;
    }

    uint8_t read_byte(const char* what) {
        if (body_.size() < pos_ + 1) throw DecodeError(std::string("truncated ") + what);
        return body_[pos_++];
    }

    size_t consumed() const { return pos_; }

    void expect_end(const char* what) const {
        if (pos_ != body_.size()) throw DecodeError(std::string(what) + " has trailing bytes");
    }

private:
    ByteSpan body_;
    size_t pos_ = 0;
};

ByteSpan body_of(ByteSpan message, FlightType expect, const FlightHeader& header) {
    if (header.type != expect) throw DecodeError("unexpected flight type");
    if (message.size() != kFlightHeaderBytes + header.body_len) {
        throw DecodeError("flight length does not match header");
    }
    return message.subspan(kFlightHeaderBytes);
}

template <size_t N>
std::array<uint8_t, N> to_array(const Bytes& b) {
    std::array<uint8_t, N> out{};
    std::copy(b.begin(), b.end(), out.begin());
    return out;
}

}  // namespace

FlightHeader parse_flight_header(ByteSpan header) {
    if (header.size() < kFlightHeaderBytes) throw DecodeError("truncated flight header");
    uint8_t type = header[0];
    if (type < 1 || type > 3) throw DecodeError("unknown flight type " + std::to_string(type));
    if (header[1] != kWireVersion) {
        throw DecodeError("unsupported wire version " + std::to_string(header[1]));
    }
    uint16_t suite_id = static_cast<uint16_t>(header[2] << 8 | header[3]);
    uint32_t body_len = read_u32_be(header.subspan(4));
    if (body_len > kMaxBodyBytes) throw DecodeError("flight body exceeds limit");
    return {static_cast<FlightType>(type), header[1], suite_id, body_len};
}

Bytes encode_flight1_prefix(const Flight1& f1) {
    size_t body_len = field_len(kRandomBytes) + field_len(f1.classical_pub.size()) +
                      field_len(f1.pq_pub.size()) + 1 +
                      (f1.qkd_key_id ? field_len(f1.qkd_key_id->size()) : 0) +
                      field_len(kDualSigBytes);
    Bytes out = make_header(FlightType::flight1, f1.suite_id, body_len);
    put_field(out, f1.client_random);
    put_field(out, f1.classical_pub);
    put_field(out, f1.pq_pub);
    out.push_back(f1.qkd_key_id ? 1 : 0);
    if (f1.qkd_key_id) put_field(out, *f1.qkd_key_id);
    return out;
}

Bytes finish_flight1(Bytes prefix, const DualSignature& sig) {
    put_field(prefix, encode_dual_signature(sig));
    return prefix;
}

Bytes encode_flight2_prefix(const Flight2& f2) {
    size_t body_len = field_len(kRandomBytes) + field_len(f2.classical_pub.size()) +
                      field_len(f2.pq_ct.size()) + field_len(kDualSigBytes) +
                      field_len(kConfirmMacBytes);
    Bytes out = make_header(FlightType::flight2, f2.suite_id, body_len);
    put_field(out, f2.server_random);
    put_field(out, f2.classical_pub);
    put_field(out, f2.pq_ct);
    return out;
}

Bytes finish_flight2(Bytes prefix, const DualSignature& sig,
                     const std::array<uint8_t, kConfirmMacBytes>& confirm_mac) {
    put_field(prefix, encode_dual_signature(sig));
    put_field(prefix, confirm_mac);
    return prefix;
}

Bytes encode_flight3(const Flight3& f3) {
    Bytes out = make_header(FlightType::flight3, f3.suite_id, field_len(kConfirmMacBytes));
    put_field(out, f3.confirm_mac);
    return out;
}

Decoded<Flight1> decode_flight1(ByteSpan message, const SizeProfile& profile) {
    FlightHeader header = parse_flight_header(message);
    ByteSpan body = body_of(message, FlightType::flight1, header);
    FieldReader r(body);

    Decoded<Flight1> out;
    out.flight.suite_id = header.suite_id;
    out.flight.client_random = to_array<kRandomBytes>(r.read_field(kRandomBytes, "client random"));
    out.flight.classical_pub = r.read_field(profile.classical_pk, "classical public key");
    out.flight.pq_pub = r.read_field(profile.pq_pk, "kem public key");
    uint8_t flag = r.read_byte("qkd flag");
    if (flag == 1) {
        out.flight.qkd_key_id = to_array<16>(r.read_field(16, "qkd key id"));
    } else if (flag != 0) {
        throw DecodeError("qkd flag must be 0 or 1");
    }
    out.presig_len = kFlightHeaderBytes + r.consumed();
    out.flight.sig = decode_dual_signature(r.read_field(kDualSigBytes, "dual signature"));
    r.expect_end("flight 1");
    return out;
}

Decoded<Flight2> decode_flight2(ByteSpan message, const SizeProfile& profile) {
    FlightHeader header = parse_flight_header(message);
    ByteSpan body = body_of(message, FlightType::flight2, header);
    FieldReader r(body);

    Decoded<Flight2> out;
    out.flight.suite_id = header.suite_id;
    out.flight.server_random = to_array<kRandomBytes>(r.read_field(kRandomBytes, "server random"));
    out.flight.classical_pub = r.read_field(profile.classical_pk, "classical public key");
    out.flight.pq_ct = r.read_field(profile.pq_ct, "kem ciphertext");
    out.presig_len = kFlightHeaderBytes + r.consumed();
    out.flight.sig = decode_dual_signature(r.read_field(kDualSigBytes, "dual signature"));
    out.flight.confirm_mac =
        to_array<kConfirmMacBytes>(r.read_field(kConfirmMacBytes, "confirm mac"));
    r.expect_end("flight 2");
    return out;
}

Decoded<Flight3> decode_flight3(ByteSpan message) {
    FlightHeader header = parse_flight_header(message);
    ByteSpan body = body_of(message, FlightType::flight3, header);
    FieldReader r(body);

    Decoded<Flight3> out;
    out.flight.suite_id = header.suite_id;
    out.flight.confirm_mac =
        to_array<kConfirmMacBytes>(r.read_field(kConfirmMacBytes, "confirm mac"));
    r.expect_end("flight 3");
    out.presig_len = message.size();
    return out;
}

}  // namespace hkx::handshake
