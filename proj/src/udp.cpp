#include "ethd/udp.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace ethd {

UdpEndpoint::UdpEndpoint(std::uint16_t local_port,
                         const std::string& remote_host,
                         std::uint16_t remote_port) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) throw std::runtime_error("udp: socket() failed");

  int reuse = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &reuse, sizeof(reuse));

  sockaddr_in local{};
  local.sin_family = AF_INET;
  local.sin_addr.s_addr = htonl(INADDR_ANY);
  local.sin_port = htons(local_port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&local), sizeof(local)) < 0) {
    ::close(fd_);
    throw std::runtime_error("udp: bind(" + std::to_string(local_port) +
                             ") failed: " + std::strerror(errno));
  }

  sockaddr_in remote{};
  remote.sin_family = AF_INET;
  remote.sin_port = htons(remote_port);
  if (::inet_pton(AF_INET, remote_host.c_str(), &remote.sin_addr) != 1) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_DGRAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(remote_host.c_str(), nullptr, &hints, &res) != 0 || !res) {
      ::close(fd_);
      throw std::runtime_error("udp: cannot resolve host " + remote_host);
    }
    remote.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
    ::freeaddrinfo(res);
  }
  // connect() fixes the unicast peer so plain send/recv can be used.
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&remote), sizeof(remote)) < 0) {
    ::close(fd_);
    throw std::runtime_error("udp: connect failed");
  }

  const int fl = ::fcntl(fd_, F_GETFL, 0);
  ::fcntl(fd_, F_SETFL, fl | O_NONBLOCK);
}

UdpEndpoint::~UdpEndpoint() {
  if (fd_ >= 0) ::close(fd_);
}

bool UdpEndpoint::send(std::span<const std::uint8_t> datagram) {
  if (fd_ < 0) return false;
  const ssize_t n = ::send(fd_, datagram.data(), datagram.size(), 0);
  // ECONNREFUSED just means the peer is not up yet; keep streaming.
  return n >= 0 || errno == ECONNREFUSED || errno == EAGAIN;
}

std::vector<Datagram> UdpEndpoint::poll() {
  std::vector<Datagram> out;
  if (fd_ < 0) return out;
  std::uint8_t buf[2048];
  for (;;) {
    const ssize_t n = ::recv(fd_, buf, sizeof(buf), 0);
    if (n < 0) break;  // EAGAIN/EWOULDBLOCK or transient error: drained
    out.emplace_back(buf, buf + n);
  }
  return out;
}

}  // namespace ethd
