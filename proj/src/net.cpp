#include "odt/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace odt::net {

namespace {

sockaddr_in parse_addr(const std::string& addr, bool listen_any) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("address must be host:port");
    std::string host = addr.substr(0, colon);
    int port = std::stoi(addr.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::invalid_argument("bad port");

    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(static_cast<uint16_t>(port));
    if (host.empty() && listen_any) {
        sa.sin_addr.s_addr = INADDR_ANY;
    } else {
        if (host.empty() || host == "localhost") host = "127.0.0.1";
        if (inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1)
            throw std::invalid_argument("bad host " + host);
    }
    return sa;
}

}  // namespace

TcpStream::~TcpStream() {
    if (fd_ >= 0) ::close(fd_);
}

void TcpStream::write(std::span<const uint8_t> data) {
    size_t sent = 0;
    while (sent < data.size()) {
        ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw std::runtime_error(std::string("send: ") + std::strerror(errno));
        }
        sent += static_cast<size_t>(n);
    }
}

size_t TcpStream::read(std::span<uint8_t> out) {
    for (;;) {
        ssize_t n = ::recv(fd_, out.data(), out.size(), 0);
        if (n >= 0) return static_cast<size_t>(n);
        if (errno == EINTR) continue;
        throw std::runtime_error(std::string("recv: ") + std::strerror(errno));
    }
}

void TcpStream::close_write() { ::shutdown(fd_, SHUT_WR); }

TcpListener::TcpListener(const std::string& addr) {
    sockaddr_in sa = parse_addr(addr, true);
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw std::runtime_error("socket failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
        ::close(fd_);
        throw std::runtime_error(std::string("bind: ") + std::strerror(errno));
    }
    if (::listen(fd_, 64) != 0) {
        ::close(fd_);
        throw std::runtime_error("listen failed");
    }
    socklen_t len = sizeof(sa);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&sa), &len);
    port_ = ntohs(sa.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpStream> TcpListener::accept() {
    for (;;) {
        int c = ::accept(fd_, nullptr, nullptr);
        if (c >= 0) {
            int one = 1;
            ::setsockopt(c, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            return std::make_unique<TcpStream>(c);
        }
        if (errno == EINTR) continue;
        throw std::runtime_error(std::string("accept: ") + std::strerror(errno));
    }
}

std::unique_ptr<TcpStream> tcp_connect(const std::string& addr) {
    sockaddr_in sa = parse_addr(addr, false);
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("socket failed");
    if (::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0) {
        ::close(fd);
        throw std::runtime_error(std::string("connect: ") + std::strerror(errno));
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return std::make_unique<TcpStream>(fd);
}

}  // namespace odt::net
