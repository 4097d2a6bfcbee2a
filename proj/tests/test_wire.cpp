#include <doctest.h>

#include <cmath>

#include "ethd/channel.hpp"
#include "ethd/rng.hpp"
#include "ethd/wire.hpp"

using namespace ethd;
using namespace ethd::wire;

namespace {

Payload random_payload(Rng& rng) {
  switch (rng.next_u64() % 4) {
    case 0: {
      HeadPoseMsg m;
      m.position = {float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3)),
                    float(rng.uniform(-3, 3))};
      m.orientation = {float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)),
                       float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))};
      return m;
    }
    case 1: {
      HandPoseMsg m;
      m.hand_id = static_cast<std::uint8_t>(rng.next_u64() % 2);
      m.tracked = static_cast<std::uint8_t>(rng.next_u64() % 2);
      m.position = {float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3)),
                    float(rng.uniform(-3, 3))};
      m.orientation = {float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)),
                       float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))};
      return m;
    }
    case 2: {
      EventFlagsMsg m;
      m.flags = static_cast<std::uint16_t>(rng.next_u64() & kKnownEventFlags);
      m.event_seq = static_cast<std::uint32_t>(rng.next_u64());
      return m;
    }
    default: {
      EndEffectorStateMsg m;
      m.position = {float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3)),
                    float(rng.uniform(-3, 3))};
      m.velocity = {float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)),
                    float(rng.uniform(-2, 2))};
      m.force = {float(rng.uniform(0, 60)), float(rng.uniform(-5, 5)),
                 float(rng.uniform(-5, 5))};
      return m;
    }
  }
}

}  // namespace

TEST_CASE("wire: header layout is 16 bytes, little-endian magic first") {
  MessageSender sender;
  const auto msg = sender.stamp(EventFlagsMsg{0, 0}, 0);
  const auto bytes = encode(msg);
  REQUIRE(bytes.size() == 22);  // 16-byte header + 6-byte payload
  CHECK(bytes[0] == 0x54);
  CHECK(bytes[1] == 0x45);
  CHECK(bytes[2] == 1);     // version
  CHECK(bytes[3] == 0x03);  // msg_type
}

TEST_CASE("wire: payload sizes") {
  CHECK(payload_size(MsgType::HeadPose) == 28);
  CHECK(payload_size(MsgType::HandPose) == 30);
  CHECK(payload_size(MsgType::EventFlags) == 6);
  CHECK(payload_size(MsgType::EndEffectorState) == 36);
}

TEST_CASE("wire: decode rejects malformed datagrams with distinct errors") {
  MessageSender sender;
  auto bytes = encode(sender.stamp(HeadPoseMsg{}, 42));

  SUBCASE("flipped magic") {
    bytes[0] ^= 0xff;
    const auto res = decode(bytes);
    CHECK_FALSE(res);
    CHECK(res.error == DecodeError::BadMagic);
  }
  SUBCASE("bad version") {
    bytes[2] = 9;
    const auto res = decode(bytes);
    CHECK_FALSE(res);
    CHECK(res.error == DecodeError::BadVersion);
  }
  SUBCASE("truncated header") {
    const auto res = decode(std::span(bytes).first(7));
    CHECK_FALSE(res);
    CHECK(res.error == DecodeError::Truncated);
  }
  SUBCASE("truncated payload") {
    const auto res = decode(std::span(bytes).first(bytes.size() - 1));
    CHECK_FALSE(res);
    CHECK(res.error == DecodeError::Truncated);
  }
  SUBCASE("unknown type") {
    bytes[3] = 0x7e;
    const auto res = decode(bytes);
    CHECK_FALSE(res);
    CHECK(res.error == DecodeError::UnknownType);
  }
}

TEST_CASE("wire: round-trip identity and canonical encoding, randomized") {
  Rng rng(2024);
  MessageSender sender;
  for (int i = 0; i < 5000; ++i) {
    const auto msg = sender.stamp(random_payload(rng),
                                  static_cast<Micros>(rng.next_u64() % (1u << 30)));
    const auto bytes = encode(msg);
    const auto back = decode(bytes);
    REQUIRE(back);
    CHECK(*back.message == msg);
    CHECK(encode(*back.message) == bytes);  // canonical: pure function of value
  }
}

TEST_CASE("wire: per-type sequence numbers strictly increase") {
  MessageSender sender;
  const auto a = sender.stamp(HeadPoseMsg{}, 0);
  const auto b = sender.stamp(EventFlagsMsg{}, 1);
  const auto c = sender.stamp(HeadPoseMsg{}, 2);
  CHECK(a.header.seq == 0);
  CHECK(b.header.seq == 0);  // independent stream per msg_type
  CHECK(c.header.seq == 1);
}

TEST_CASE("dedup: duplicates dropped, first arrival delivered") {
  EventDeduper dedup;
  EventFlagsMsg e1{0x01, 10};
  EventFlagsMsg e2{0x02, 11};

  SUBCASE("[e1,e1,e1] -> [e1]") {
    CHECK(dedup.accept(e1));
    CHECK_FALSE(dedup.accept(e1));
    CHECK_FALSE(dedup.accept(e1));
  }
  SUBCASE("[e1,e2,e1] -> [e1,e2]") {
    CHECK(dedup.accept(e1));
    CHECK(dedup.accept(e2));
    CHECK_FALSE(dedup.accept(e1));
  }
  SUBCASE("stale events outside the window are dropped") {
    CHECK(dedup.accept(EventFlagsMsg{0, 1000}));
    CHECK_FALSE(dedup.accept(EventFlagsMsg{0, 1000 - EventDeduper::kWindow}));
    CHECK(dedup.accept(EventFlagsMsg{0, 1000 - EventDeduper::kWindow + 1}));
  }
}

TEST_CASE("dedup: idempotence over a random stream") {
  Rng rng(5);
  std::vector<EventFlagsMsg> stream;
  std::uint32_t seq = 0;
  for (int i = 0; i < 500; ++i) {
    if (rng.bernoulli(0.5) && seq > 0) {
      // re-send a recent event
      stream.push_back({0, seq - 1 - static_cast<std::uint32_t>(
                               rng.next_u64() % std::min<std::uint32_t>(seq, 8))});
    } else {
      stream.push_back({0, seq++});
    }
  }

  auto run = [](const std::vector<EventFlagsMsg>& in) {
    EventDeduper d;
    std::vector<EventFlagsMsg> out;
    for (const auto& e : in)
      if (d.accept(e)) out.push_back(e);
    return out;
  };

  const auto once = run(stream);
  const auto twice = run(once);
  CHECK(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i)
    CHECK(once[i].event_seq == twice[i].event_seq);
}

TEST_CASE("redundancy: K frames carry the event, K=0 rejected") {
  CHECK_THROWS_AS(RedundantEventSender({0}), std::invalid_argument);

  RedundantEventSender sender({3});
  sender.announce(0x01);
  int copies = 0;
  for (int f = 0; f < 6; ++f) copies += static_cast<int>(sender.frame_batch().size());
  CHECK(copies == 3);
  CHECK(sender.idle());
}

namespace {

// Measured delivery rate for N events under IID loss p with K repeats.
double measured_delivery(double p, int k, int n_events, std::uint64_t seed) {
  SimClock clock;
  ChannelConfig cfg;
  cfg.loss_rate = p;
  cfg.seed = seed;
  LoopbackChannel channel(&clock, cfg);
  MessageSender sender;
  RedundantEventSender events({k});
  EventDeduper dedup;
  int delivered = 0;
  for (int e = 0; e < n_events; ++e) {
    events.announce(kSequenceAdvance);
    for (int f = 0; f < k; ++f) {
      clock.advance(11'111);
      for (const auto& ev : events.frame_batch()) sender.send(channel, ev, clock.now());
      for (const auto& d : channel.poll()) {
        const auto res = decode(d);
        REQUIRE(res);
        if (const auto* ev = std::get_if<EventFlagsMsg>(&res.message->payload))
          if (dedup.accept(*ev)) ++delivered;
      }
    }
  }
  return static_cast<double>(delivered) / n_events;
}

}  // namespace

TEST_CASE("redundancy: Monte-Carlo delivery matches 1 - p^K") {
  // Oracle: per-event delivery is Bernoulli(1 - p^K) under IID loss.
  struct Case {
    double p;
    int k;
  };
  for (const Case c : {Case{0.3, 5}, Case{0.3, 1}, Case{0.5, 3}}) {
    const int n = 100000;
    const double expected = 1.0 - std::pow(c.p, c.k);
    const double rate = measured_delivery(c.p, c.k, n, 0xabc + c.k);
    const double se = std::sqrt(expected * (1.0 - expected) / n);
    CHECK(rate >= expected - 3.0 * se);
    CHECK(rate <= std::min(1.0, expected + 3.0 * se));
  }
}

TEST_CASE("redundancy: zero loss delivers every event exactly once") {
  const double rate = measured_delivery(0.0, 5, 2000, 9);
  CHECK(rate == 1.0);
}

TEST_CASE("channel: latency and jitter bounds, closed sink reports failure") {
  SimClock clock;
  ChannelConfig cfg;
  cfg.latency_us = 5000;
  cfg.jitter_us = 1000;
  cfg.seed = 77;
  LoopbackChannel channel(&clock, cfg);

  const std::uint8_t payload[4] = {1, 2, 3, 4};
  CHECK(channel.send(payload));
  CHECK(channel.poll().empty());  // not due yet
  clock.advance(3999);
  CHECK(channel.poll().empty());  // below latency - jitter
  clock.advance(2001);            // now past latency + jitter
  const auto got = channel.poll();
  REQUIRE(got.size() == 1);
  CHECK(got[0] == Datagram(payload, payload + 4));

  channel.close();
  CHECK_FALSE(channel.send(payload));
}
