// Thin non-blocking UDP unicast wrapper for the two-process real-time mode.
// Robot side listens on 47810, headset side on 47811 by default.

#ifndef ETHD_UDP_HPP
#define ETHD_UDP_HPP

#include <cstdint>
#include <string>

#include "ethd/channel.hpp"

namespace ethd {

constexpr std::uint16_t kRobotPort = 47810;
constexpr std::uint16_t kHeadsetPort = 47811;

class UdpEndpoint : public Endpoint {
 public:
  // Binds local_port and unicasts to remote_host:remote_port.
  UdpEndpoint(std::uint16_t local_port, const std::string& remote_host,
              std::uint16_t remote_port);
  ~UdpEndpoint() override;

  UdpEndpoint(const UdpEndpoint&) = delete;
  UdpEndpoint& operator=(const UdpEndpoint&) = delete;

  bool send(std::span<const std::uint8_t> datagram) override;
  std::vector<Datagram> poll() override;

 private:
  int fd_ = -1;
};

}  // namespace ethd

#endif  // ETHD_UDP_HPP
