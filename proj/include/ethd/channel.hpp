// In-process datagram transport for virtual-clock runs: connectionless,
// unordered on jitter, IID loss, all seeded.

#ifndef ETHD_CHANNEL_HPP
#define ETHD_CHANNEL_HPP

#include <cstdint>
#include <queue>
#include <vector>

#include "ethd/geometry.hpp"
#include "ethd/rng.hpp"
#include "ethd/wire.hpp"

namespace ethd {

using Datagram = std::vector<std::uint8_t>;

// Bidirectional transport surface used by both loop sides; implemented by
// the loopback channel pair (virtual clock) and by UDP sockets (real time).
struct Endpoint : wire::DatagramSink {
  // Datagrams that have arrived since the last poll.
  virtual std::vector<Datagram> poll() = 0;
};

struct ChannelConfig {
  double loss_rate = 0.0;   // IID per-datagram drop probability
  Micros latency_us = 0;    // fixed one-way delay
  Micros jitter_us = 0;     // uniform +/- bound added to the delay
  std::uint64_t seed = 0;
};

// One direction of a simulated datagram link. Delivery times are stamped at
// send; poll() releases whatever is due at the channel clock's current time.
class LoopbackChannel : public wire::DatagramSink {
 public:
  LoopbackChannel(const SimClock* clock, ChannelConfig cfg);

  bool send(std::span<const std::uint8_t> datagram) override;
  std::vector<Datagram> poll();
  void close() { closed_ = true; }

  std::uint64_t sent_count() const { return sent_; }
  std::uint64_t dropped_count() const { return dropped_; }

 private:
  struct InFlight {
    Micros deliver_at;
    std::uint64_t order;
    Datagram bytes;
    bool operator>(const InFlight& o) const {
      if (deliver_at != o.deliver_at) return deliver_at > o.deliver_at;
      return order > o.order;
    }
  };

  const SimClock* clock_;
  ChannelConfig cfg_;
  Rng rng_;
  std::priority_queue<InFlight, std::vector<InFlight>, std::greater<>> queue_;
  std::uint64_t next_order_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t dropped_ = 0;
  bool closed_ = false;
};

// Endpoint view over an outbound and an inbound channel.
class ChannelEndpoint : public Endpoint {
 public:
  ChannelEndpoint(LoopbackChannel* tx, LoopbackChannel* rx) : tx_(tx), rx_(rx) {}

  bool send(std::span<const std::uint8_t> datagram) override {
    return tx_->send(datagram);
  }
  std::vector<Datagram> poll() override { return rx_->poll(); }

 private:
  LoopbackChannel* tx_;
  LoopbackChannel* rx_;
};

// Two endpoints joined by a symmetric pair of loopback channels.
class LoopbackLink {
 public:
  LoopbackLink(const SimClock* clock, ChannelConfig a_to_b, ChannelConfig b_to_a)
      : a_to_b_(clock, a_to_b),
        b_to_a_(clock, b_to_a),
        a_(&a_to_b_, &b_to_a_),
        b_(&b_to_a_, &a_to_b_) {}

  Endpoint& a() { return a_; }
  Endpoint& b() { return b_; }

 private:
  LoopbackChannel a_to_b_;
  LoopbackChannel b_to_a_;
  ChannelEndpoint a_;
  ChannelEndpoint b_;
};

}  // namespace ethd

#endif  // ETHD_CHANNEL_HPP
