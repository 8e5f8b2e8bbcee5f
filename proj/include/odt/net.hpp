#pragma once

#include <memory>
#include <string>

#include "odt/wire.hpp"

namespace odt::net {

// Blocking TCP stream over a connected socket; owns the fd.
class TcpStream final : public wire::Stream {
  public:
    explicit TcpStream(int fd) : fd_(fd) {}
    ~TcpStream() override;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;

    void write(std::span<const uint8_t> data) override;
    size_t read(std::span<uint8_t> out) override;
    void close_write() override;

  private:
    int fd_;
};

class TcpListener {
  public:
    // addr is "host:port"; host may be empty for INADDR_ANY.
    explicit TcpListener(const std::string& addr);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::unique_ptr<TcpStream> accept();
    uint16_t port() const { return port_; }

  private:
    int fd_;
    uint16_t port_;
};

std::unique_ptr<TcpStream> tcp_connect(const std::string& addr);

}  // namespace odt::net
