#include "hkx/net/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "hkx/errors.hpp"

namespace hkx::net {

std::pair<std::string, uint16_t> parse_hostport(const std::string& addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == addr.size()) {
        throw Error("malformed address (want host:port): " + addr);
    }
    std::string host = addr.substr(0, colon);
    unsigned long port = 0;
    try {
        port = std::stoul(addr.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error("malformed port in address: " + addr);
    }
    if (port > 65535) throw Error("port out of range in address: " + addr);
    return {host, static_cast<uint16_t>(port)};  // port 0 = ephemeral
}

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

TcpStream::~TcpStream() { close(); }

TcpStream TcpStream::connect(const std::string& host, uint16_t port) {
    struct addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    struct addrinfo* res = nullptr;
    std::string service = std::to_string(port);
    int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res);
    if (rc != 0) throw NetworkError("resolve " + host + ": " + gai_strerror(rc));

    int fd = -1;
    for (auto* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw NetworkError("connect " + host + ":" + service + " failed");
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpStream(fd);
}

void TcpStream::write_all(ByteSpan data) {
    size_t off = 0;
    while (off < data.size()) {
        ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw NetworkError(std::string("send failed: ") + std::strerror(errno));
        }
        off += static_cast<size_t>(n);
    }
}

void TcpStream::read_exact(std::span<uint8_t> out) {
    size_t off = 0;
    while (off < out.size()) {
        ssize_t n = ::recv(fd_, out.data() + off, out.size() - off, 0);
        if (n == 0) throw NetworkError("peer closed connection");
        if (n < 0) {
            if (errno == EINTR) continue;
            throw NetworkError(std::string("recv failed: ") + std::strerror(errno));
        }
        off += static_cast<size_t>(n);
    }
}

Bytes TcpStream::read_exact(size_t n) {
    Bytes out(n);
    read_exact(std::span<uint8_t>(out));
    return out;
}

void TcpStream::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

TcpListener::~TcpListener() { close(); }

TcpListener TcpListener::bind(const std::string& host, uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw NetworkError(std::string("socket failed: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    struct sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw NetworkError("listener host must be an IPv4 address: " + host);
    }
    if (::bind(fd, reinterpret_cast<struct sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw NetworkError("bind " + host + ":" + std::to_string(port) + " failed: " +
                           std::strerror(errno));
    }
    if (::listen(fd, 16) != 0) {
        ::close(fd);
        throw NetworkError(std::string("listen failed: ") + std::strerror(errno));
    }
    struct sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(fd, reinterpret_cast<struct sockaddr*>(&bound), &len);

    TcpListener out;
    out.fd_ = fd;
    out.port_ = ntohs(bound.sin_port);
    return out;
}

TcpStream TcpListener::accept() {
    while (true) {
        int fd = ::accept(fd_, nullptr, nullptr);
        if (fd >= 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            return TcpStream(fd);
        }
        if (errno == EINTR) continue;
        throw NetworkError(std::string("accept failed: ") + std::strerror(errno));
    }
}

void TcpListener::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

}  // namespace hkx::net
