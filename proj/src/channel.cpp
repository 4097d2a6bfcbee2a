#include "ethd/channel.hpp"

namespace ethd {

LoopbackChannel::LoopbackChannel(const SimClock* clock, ChannelConfig cfg)
    : clock_(clock), cfg_(cfg), rng_(derive_seed(cfg.seed, 0xc4a77e1)) {}

bool LoopbackChannel::send(std::span<const std::uint8_t> datagram) {
  if (closed_) return false;
  ++sent_;
  if (cfg_.loss_rate > 0.0 && rng_.bernoulli(cfg_.loss_rate)) {
    ++dropped_;
    return true;  // dropped in flight; the sender cannot tell
  }
  Micros delay = cfg_.latency_us;
  if (cfg_.jitter_us > 0) {
    delay += to_micros(rng_.uniform(-static_cast<double>(cfg_.jitter_us),
                                    static_cast<double>(cfg_.jitter_us)) *
                       1e-6);
    if (delay < 0) delay = 0;
  }
  queue_.push({clock_->now() + delay, next_order_++,
               Datagram(datagram.begin(), datagram.end())});
  return true;
}

std::vector<Datagram> LoopbackChannel::poll() {
  std::vector<Datagram> out;
  const Micros now = clock_->now();
  while (!queue_.empty() && queue_.top().deliver_at <= now) {
    out.push_back(queue_.top().bytes);
    queue_.pop();
  }
  return out;
}

}  // namespace ethd
