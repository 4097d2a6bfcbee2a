// Telemetry wire format bridging the 1000 Hz robot loop and the ~90 Hz
// headset loop. Fixed little-endian layout, no padding:
//
//   header (16 bytes): magic u16 = 0x4554, version u8 = 1, msg_type u8,
//                      seq u32, timestamp_us u64
//   payload           : per message type, f32 fields
//
// The core simulation runs in double precision; narrowing to f32 happens
// exactly once, here at the wire boundary. Event messages are transmitted
// redundantly over multiple sender frames and deduplicated by event_seq on
// the receive side; everything else is fire-and-forget (low latency beats
// guaranteed delivery for pose streams).

#ifndef ETHD_WIRE_HPP
#define ETHD_WIRE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ethd/geometry.hpp"

namespace ethd::wire {

constexpr std::uint16_t kMagic = 0x4554;
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 16;

enum class MsgType : std::uint8_t {
  HeadPose = 0x01,
  HandPose = 0x02,
  EventFlags = 0x03,
  EndEffectorState = 0x04,
};

struct Vec3f {
  float x = 0.f, y = 0.f, z = 0.f;
  bool operator==(const Vec3f&) const = default;
};

struct Quatf {
  float w = 1.f, x = 0.f, y = 0.f, z = 0.f;
  bool operator==(const Quatf&) const = default;
};

inline Vec3f narrow(const Vec3& v) {
  return {static_cast<float>(v.x), static_cast<float>(v.y),
          static_cast<float>(v.z)};
}
inline Vec3 widen(const Vec3f& v) { return {v.x, v.y, v.z}; }
inline Quatf narrow(const Quat& q) {
  return {static_cast<float>(q.w), static_cast<float>(q.x),
          static_cast<float>(q.y), static_cast<float>(q.z)};
}
inline Quat widen(const Quatf& q) { return {q.w, q.x, q.y, q.z}; }

struct MessageHeader {
  std::uint16_t magic = kMagic;
  std::uint8_t version = kVersion;
  std::uint8_t msg_type = 0;
  std::uint32_t seq = 0;
  std::uint64_t timestamp_us = 0;
  bool operator==(const MessageHeader&) const = default;
};

// Head pose in the board frame. Payload: 28 bytes.
struct HeadPoseMsg {
  Vec3f position;
  Quatf orientation;
  bool operator==(const HeadPoseMsg&) const = default;
};

// Tracked hand sample in the board frame. Payload: 30 bytes.
struct HandPoseMsg {
  std::uint8_t hand_id = 0;  // 0 = left, 1 = right
  std::uint8_t tracked = 0;  // 0 / 1
  Vec3f position;
  Quatf orientation;
  bool operator==(const HandPoseMsg&) const = default;
};

// Boolean subsystem-synchronization signals. Payload: 6 bytes.
enum EventFlag : std::uint16_t {
  kUserAtMark = 1u << 0,
  kAvatarReady = 1u << 1,
  kContactDetected = 1u << 2,
  kPassthroughActive = 1u << 3,
  kEmergencyStop = 1u << 4,
  kSequenceAdvance = 1u << 5,
};
constexpr std::uint16_t kKnownEventFlags = 0x003f;

struct EventFlagsMsg {
  std::uint16_t flags = 0;
  std::uint32_t event_seq = 0;
  bool operator==(const EventFlagsMsg&) const = default;
};

// Robot end-effector state in the board frame, reported every robot tick.
// Payload: 36 bytes.
struct EndEffectorStateMsg {
  Vec3f position;
  Vec3f velocity;
  Vec3f force;
  bool operator==(const EndEffectorStateMsg&) const = default;
};

using Payload =
    std::variant<HeadPoseMsg, HandPoseMsg, EventFlagsMsg, EndEffectorStateMsg>;

MsgType payload_type(const Payload& p);
std::size_t payload_size(MsgType t);

struct TelemetryMessage {
  MessageHeader header;
  Payload payload;
  bool operator==(const TelemetryMessage&) const = default;
};

// ---------------------------------------------------------------------------
// Codec

std::vector<std::uint8_t> encode(const TelemetryMessage& msg);

enum class DecodeError {
  None,
  BadMagic,
  BadVersion,
  Truncated,
  UnknownType,
};

const char* decode_error_name(DecodeError e);

struct DecodeResult {
  std::optional<TelemetryMessage> message;
  DecodeError error = DecodeError::None;
  explicit operator bool() const { return message.has_value(); }
};

DecodeResult decode(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Transport-facing interfaces

struct DatagramSink {
  virtual ~DatagramSink() = default;
  // false once the sink is closed.
  virtual bool send(std::span<const std::uint8_t> datagram) = 0;
};

// Stamps headers with per-type strictly increasing sequence numbers.
class MessageSender {
 public:
  TelemetryMessage stamp(Payload payload, Micros timestamp_us);
  bool send(DatagramSink& sink, Payload payload, Micros timestamp_us);

 private:
  std::uint32_t next_seq_[5] = {0, 0, 0, 0, 0};
};

// ---------------------------------------------------------------------------
// Redundant event delivery

struct RedundancyPolicy {
  int repeat_count = 5;  // K >= 1; default covers one headset frame of loss
};

// Queues each announced event for transmission on K consecutive sender
// frames with an identical event_seq.
class RedundantEventSender {
 public:
  explicit RedundantEventSender(RedundancyPolicy policy = {});

  // Registers a new event carrying the given flag snapshot.
  std::uint32_t announce(std::uint16_t flags);

  // Copies due for transmission on this sender frame (each remaining event
  // once per frame until its repeat budget is exhausted).
  std::vector<EventFlagsMsg> frame_batch();

  bool idle() const { return pending_.empty(); }

 private:
  struct Pending {
    EventFlagsMsg msg;
    int remaining;
  };
  RedundancyPolicy policy_;
  std::uint32_t next_event_seq_ = 0;
  std::vector<Pending> pending_;
};

// Receive-side filter: first arrival per event_seq is delivered, duplicates
// and stale (older than the 64-entry window) arrivals are dropped.
class EventDeduper {
 public:
  static constexpr std::uint32_t kWindow = 64;

  // true if this is a first arrival that should be delivered.
  bool accept(const EventFlagsMsg& msg);

 private:
  bool any_seen_ = false;
  std::uint32_t max_seen_ = 0;
  // slot i holds seq+1 for the newest seen seq with seq % kWindow == i.
  std::uint64_t seen_[kWindow] = {};
};

}  // namespace ethd::wire

#endif  // ETHD_WIRE_HPP
