#include "rfidac/reader_sim.hpp"

#include <algorithm>
#include <cmath>

#include "rfidac/errors.hpp"

namespace rfidac {

ReaderSim::ReaderSim(ReaderConfig config) : config_(std::move(config)) {
  if (config_.holdoff.count() <= 0) {
    throw Error(Errc::ConfigInvalid, "holdoff must be positive");
  }
}

void ReaderSim::place_tag(const TagRecord& tag, const AntennaPose& pose) {
  read_uid(tag);
  field_.insert_or_assign(tag.uid, FieldEntry{tag, pose});
}

void ReaderSim::remove_tag(std::uint32_t uid) noexcept { field_.erase(uid); }

void ReaderSim::set_scan(bool on) {
  if (!connected_) throw Error(Errc::NotConnected, "reader is not connected");
  scanning_ = on;
  if (!on) holdoff_.clear();
}

void ReaderSim::set_connected(bool connected) noexcept {
  connected_ = connected;
  if (!connected) {
    scanning_ = false;
    holdoff_.clear();
    inbound_.clear();
  }
}

std::vector<Frame> ReaderSim::tick(Instant now) {
  if (!scanning_ || !connected_) return {};
  std::erase_if(holdoff_, [&](const auto& kv) { return now - kv.second >= config_.holdoff; });

  std::optional<std::uint32_t> best_uid;
  double best_emf = 0.0;
  for (const auto& [uid, entry] : field_) {
    if (holdoff_.contains(uid)) continue;
    const double emf = induced_emf(entry.pose, config_.calibration);
    if (emf < config_.calibration.read_threshold_volts()) continue;
    // Map iteration is uid-ascending, so a strict comparison keeps the lowest uid on ties.
    if (!best_uid || emf > best_emf) {
      best_uid = uid;
      best_emf = emf;
    }
  }
  if (!best_uid) return {};

  holdoff_[*best_uid] = now;
  const double mv = std::clamp(std::round(best_emf * 1000.0), 0.0, 65535.0);
  return {make_tag_detected({config_.reader_id, *best_uid, static_cast<std::uint16_t>(mv)})};
}

std::optional<TagRecord> ReaderSim::take_write_slot() noexcept {
  auto tag = std::move(write_slot_);
  write_slot_.reset();
  return tag;
}

Bytes ReaderSim::receive(std::span<const std::uint8_t> bytes) {
  if (!connected_) return {};
  inbound_.insert(inbound_.end(), bytes.begin(), bytes.end());
  auto decoded = decode_stream(inbound_);
  inbound_ = std::move(decoded.remainder);
  Bytes out;
  for (const auto& frame : decoded.frames) {
    const auto reply = encode_frame(handle(frame));
    out.insert(out.end(), reply.begin(), reply.end());
  }
  return out;
}

Frame ReaderSim::handle(const Frame& frame) {
  switch (static_cast<Command>(frame.command)) {
    case Command::Ping:
      return make_ack(frame.command);
    case Command::SetScan:
      if (const auto on = parse_set_scan(frame)) {
        set_scan(*on);
        return make_ack(frame.command);
      }
      break;
    case Command::WriteTag:
      if (const auto req = parse_write_tag(frame); req && write_slot_) {
        try {
          write_slot_ = program_tag(*write_slot_, req->uid, req->type);
          return make_ack(frame.command);
        } catch (const Error&) {
          // incompatible tag on the pad
        }
      }
      break;
    default:
      break;
  }
  return make_nak(frame.command);
}

}  // namespace rfidac
