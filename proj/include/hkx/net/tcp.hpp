#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "hkx/bytes.hpp"

namespace hkx::net {

// "host:port" -> (host, port); throws Error on malformed input.
std::pair<std::string, uint16_t> parse_hostport(const std::string& addr);

// Blocking stream socket with exact-length reads. Move-only.
class TcpStream {
public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    TcpStream& operator=(TcpStream&& other) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;
    ~TcpStream();

    static TcpStream connect(const std::string& host, uint16_t port);

    bool valid() const { return fd_ >= 0; }
    void write_all(ByteSpan data);
    // Throws NetworkError on EOF or socket error.
    void read_exact(std::span<uint8_t> out);
    Bytes read_exact(size_t n);
    void close();

private:
    int fd_ = -1;
};

class TcpListener {
public:
    TcpListener() = default;
    TcpListener(TcpListener&& other) noexcept : fd_(std::exchange(other.fd_, -1)), port_(other.port_) {}
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    ~TcpListener();

    // port 0 picks an ephemeral port; bound_port() reports the actual one.
    static TcpListener bind(const std::string& host, uint16_t port);

    uint16_t bound_port() const { return port_; }
    TcpStream accept();
    void close();

private:
    int fd_ = -1;
    uint16_t port_ = 0;
};

}  // namespace hkx::net
