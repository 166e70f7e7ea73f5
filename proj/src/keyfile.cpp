#include "hkx/keyfile.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include "hkx/errors.hpp"

namespace hkx {

namespace {

constexpr char kMagic[4] = {'H', 'K', 'X', '1'};

void put_field(Bytes& out, ByteSpan field) {
    put_u32_be(out, static_cast<uint32_t>(field.size()));
    append(out, field);
}

class Reader {
public:
    explicit Reader(ByteSpan data) : data_(data) {}

    void expect_magic() {
        if (data_.size() < pos_ + 4 || std::memcmp(data_.data() + pos_, kMagic, 4) != 0) {
            throw DecodeError("key file: bad magic");
        }
        pos_ += 4;
    }

    uint16_t read_u16() {
        if (data_.size() < pos_ + 2) throw DecodeError("key file: truncated");
        uint16_t v = static_cast<uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
        pos_ += 2;
        return v;
    }

    Bytes read_field() {
        if (data_.size() < pos_ + 4) throw DecodeError("key file: truncated length");
        uint32_t len = read_u32_be(data_.subspan(pos_));
        pos_ += 4;
        if (data_.size() < pos_ + len) throw DecodeError("key file: truncated field");
        Bytes out(data_.begin() + static_cast<ptrdiff_t>(pos_),
                  data_.begin() + static_cast<ptrdiff_t>(pos_ + len));
        pos_ += len;
        return out;
    }

    void expect_end() const {
        if (pos_ != data_.size()) throw DecodeError("key file: trailing bytes");
    }

private:
    ByteSpan data_;
    size_t pos_ = 0;
};

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void write_file(const std::string& path, ByteSpan data, bool restrict_mode) {
    int flags = O_WRONLY | O_CREAT | O_TRUNC;
    mode_t mode = restrict_mode ? 0600 : 0644;
    int fd = ::open(path.c_str(), flags, mode);
    if (fd < 0) throw Error("cannot create " + path + ": " + std::strerror(errno));
    if (restrict_mode) ::fchmod(fd, 0600);  // honor the mode even under a permissive umask
    size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::write(fd, data.data() + off, data.size() - off);
        if (n < 0) {
            ::close(fd);
            throw Error("write failed for " + path + ": " + std::strerror(errno));
        }
        off += static_cast<size_t>(n);
    }
    ::close(fd);
}

}  // namespace

Bytes encode_keypair(const DualKeypair& kp) {
    Bytes out(kMagic, kMagic + 4);
    out.push_back(0);
    out.push_back(static_cast<uint8_t>(kKeyfileTagKeypair));
    put_field(out, kp.classical_signing);
    put_field(out, kp.classical_verifying);
    put_field(out, kp.pq_signing);
    put_field(out, kp.pq_verifying);
    return out;
}

Bytes encode_verifying(const DualVerifyingKeys& keys) {
    Bytes out(kMagic, kMagic + 4);
    out.push_back(0);
    out.push_back(static_cast<uint8_t>(kKeyfileTagVerifying));
    put_field(out, keys.classical);
    put_field(out, keys.pq);
    return out;
}

DualKeypair decode_keypair(ByteSpan data) {
    Reader r(data);
    r.expect_magic();
    if (r.read_u16() != kKeyfileTagKeypair) throw DecodeError("key file: not a keypair file");
    DualKeypair kp;
    kp.classical_signing = r.read_field();
    kp.classical_verifying = r.read_field();
    kp.pq_signing = r.read_field();
    kp.pq_verifying = r.read_field();
    r.expect_end();
    return kp;
}

DualVerifyingKeys decode_verifying(ByteSpan data) {
    Reader r(data);
    r.expect_magic();
    if (r.read_u16() != kKeyfileTagVerifying) throw DecodeError("key file: not a verifying-key file");
    DualVerifyingKeys keys;
    keys.classical = r.read_field();
    keys.pq = r.read_field();
    r.expect_end();
    return keys;
}

void write_keypair_file(const std::string& path, const DualKeypair& kp) {
    write_file(path, encode_keypair(kp), true);
}

void write_verifying_file(const std::string& path, const DualVerifyingKeys& keys) {
    write_file(path, encode_verifying(keys), false);
}

DualKeypair read_keypair_file(const std::string& path) { return decode_keypair(read_file(path)); }

DualVerifyingKeys read_verifying_file(const std::string& path) {
    return decode_verifying(read_file(path));
}

}  // namespace hkx
