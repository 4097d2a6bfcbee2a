#include "ethd/wire.hpp"

#include <bit>
#include <cstring>

namespace ethd::wire {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void put_vec3(std::vector<std::uint8_t>& out, const Vec3f& v) {
  put_f32(out, v.x);
  put_f32(out, v.y);
  put_f32(out, v.z);
}

void put_quat(std::vector<std::uint8_t>& out, const Quatf& q) {
  put_f32(out, q.w);
  put_f32(out, q.x);
  put_f32(out, q.y);
  put_f32(out, q.z);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool ok() const { return ok_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint8_t u8() { return ok_ && need(1) ? bytes_[pos_++] : 0; }
  std::uint16_t u16() {
    if (!ok_ || !need(2)) return 0;
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_]) |
                      static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    if (!ok_ || !need(4)) return 0;
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    if (!ok_ || !need(8)) return 0;
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  Vec3f vec3() { return {f32(), f32(), f32()}; }
  Quatf quat() { return {f32(), f32(), f32(), f32()}; }

 private:
  bool need(std::size_t n) {
    if (remaining() < n) ok_ = false;
    return ok_;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

}  // namespace

MsgType payload_type(const Payload& p) {
  switch (p.index()) {
    case 0: return MsgType::HeadPose;
    case 1: return MsgType::HandPose;
    case 2: return MsgType::EventFlags;
    default: return MsgType::EndEffectorState;
  }
}

std::size_t payload_size(MsgType t) {
  switch (t) {
    case MsgType::HeadPose: return 28;
    case MsgType::HandPose: return 30;
    case MsgType::EventFlags: return 6;
    case MsgType::EndEffectorState: return 36;
  }
  return 0;
}

const char* decode_error_name(DecodeError e) {
  switch (e) {
    case DecodeError::None: return "none";
    case DecodeError::BadMagic: return "bad_magic";
    case DecodeError::BadVersion: return "bad_version";
    case DecodeError::Truncated: return "truncated";
    case DecodeError::UnknownType: return "unknown_type";
  }
  return "?";
}

std::vector<std::uint8_t> encode(const TelemetryMessage& msg) {
  const MsgType type = payload_type(msg.payload);
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + payload_size(type));

  put_u16(out, kMagic);
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(type));
  put_u32(out, msg.header.seq);
  put_u64(out, msg.header.timestamp_us);

  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HeadPoseMsg>) {
          put_vec3(out, p.position);
          put_quat(out, p.orientation);
        } else if constexpr (std::is_same_v<T, HandPoseMsg>) {
          out.push_back(p.hand_id);
          out.push_back(p.tracked);
          put_vec3(out, p.position);
          put_quat(out, p.orientation);
        } else if constexpr (std::is_same_v<T, EventFlagsMsg>) {
          put_u16(out, p.flags);
          put_u32(out, p.event_seq);
        } else {
          put_vec3(out, p.position);
          put_vec3(out, p.velocity);
          put_vec3(out, p.force);
        }
      },
      msg.payload);
  return out;
}

DecodeResult decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) return {std::nullopt, DecodeError::Truncated};

  Reader r(bytes);
  MessageHeader h;
  h.magic = r.u16();
  if (h.magic != kMagic) return {std::nullopt, DecodeError::BadMagic};
  h.version = r.u8();
  if (h.version != kVersion) return {std::nullopt, DecodeError::BadVersion};
  h.msg_type = r.u8();
  h.seq = r.u32();
  h.timestamp_us = r.u64();

  const auto type = static_cast<MsgType>(h.msg_type);
  switch (type) {
    case MsgType::HeadPose:
    case MsgType::HandPose:
    case MsgType::EventFlags:
    case MsgType::EndEffectorState: break;
    default: return {std::nullopt, DecodeError::UnknownType};
  }
  if (bytes.size() - kHeaderSize < payload_size(type))
    return {std::nullopt, DecodeError::Truncated};

  Payload payload;
  switch (type) {
    case MsgType::HeadPose: {
      HeadPoseMsg m;
      m.position = r.vec3();
      m.orientation = r.quat();
      payload = m;
      break;
    }
    case MsgType::HandPose: {
      HandPoseMsg m;
      m.hand_id = r.u8();
      m.tracked = r.u8();
      m.position = r.vec3();
      m.orientation = r.quat();
      payload = m;
      break;
    }
    case MsgType::EventFlags: {
      EventFlagsMsg m;
      m.flags = r.u16();
      m.event_seq = r.u32();
      payload = m;
      break;
    }
    case MsgType::EndEffectorState: {
      EndEffectorStateMsg m;
      m.position = r.vec3();
      m.velocity = r.vec3();
      m.force = r.vec3();
      payload = m;
      break;
    }
  }
  if (!r.ok()) return {std::nullopt, DecodeError::Truncated};
  return {TelemetryMessage{h, payload}, DecodeError::None};
}

TelemetryMessage MessageSender::stamp(Payload payload, Micros timestamp_us) {
  const auto type = static_cast<std::size_t>(payload_type(payload));
  TelemetryMessage msg;
  msg.header.msg_type = static_cast<std::uint8_t>(type);
  msg.header.seq = next_seq_[type]++;
  msg.header.timestamp_us = static_cast<std::uint64_t>(timestamp_us);
  msg.payload = std::move(payload);
  return msg;
}

bool MessageSender::send(DatagramSink& sink, Payload payload,
                         Micros timestamp_us) {
  const auto bytes = encode(stamp(std::move(payload), timestamp_us));
  return sink.send(bytes);
}

RedundantEventSender::RedundantEventSender(RedundancyPolicy policy)
    : policy_(policy) {
  if (policy_.repeat_count < 1)
    throw std::invalid_argument("RedundancyPolicy: repeat_count must be >= 1");
}

std::uint32_t RedundantEventSender::announce(std::uint16_t flags) {
  const std::uint32_t seq = next_event_seq_++;
  pending_.push_back({EventFlagsMsg{flags, seq}, policy_.repeat_count});
  return seq;
}

std::vector<EventFlagsMsg> RedundantEventSender::frame_batch() {
  std::vector<EventFlagsMsg> out;
  out.reserve(pending_.size());
  for (auto& p : pending_) {
    out.push_back(p.msg);
    --p.remaining;
  }
  std::erase_if(pending_, [](const Pending& p) { return p.remaining <= 0; });
  return out;
}

bool EventDeduper::accept(const EventFlagsMsg& msg) {
  const std::uint32_t seq = msg.event_seq;
  if (any_seen_ && max_seen_ >= kWindow && seq < max_seen_ - (kWindow - 1))
    return false;  // stale, outside the window
  const std::uint32_t slot = seq % kWindow;
  if (seen_[slot] == static_cast<std::uint64_t>(seq) + 1) return false;
  seen_[slot] = static_cast<std::uint64_t>(seq) + 1;
  if (!any_seen_ || seq > max_seen_) {
    max_seen_ = seq;
    any_seen_ = true;
  }
  return true;
}

}  // namespace ethd::wire
