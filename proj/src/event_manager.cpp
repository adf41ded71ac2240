#include "rfidac/event_manager.hpp"

#include "rfidac/errors.hpp"

namespace rfidac {

void PortSession::set_link_up(bool up) noexcept {
  link_up_ = up;
  if (!up) inbound_.clear();
}

IngestResult PortSession::ingest(std::span<const std::uint8_t> bytes) {
  if (!link_up_) throw Error(Errc::LinkDown, "reader link is down");
  inbound_.insert(inbound_.end(), bytes.begin(), bytes.end());
  auto decoded = decode_stream(inbound_);
  inbound_ = std::move(decoded.remainder);
  defects_ += decoded.defects;

  IngestResult out;
  for (auto& frame : decoded.frames) {
    if (const auto det = parse_tag_detected(frame)) {
      out.detections.push_back({det->reader_id, det->uid, det->emf_millivolts});
      continue;
    }
    const auto answered = parse_reply(frame);
    if (answered && *answered == static_cast<std::uint8_t>(Command::WriteTag) && pending_) {
      out.writes.push_back({*pending_, frame.is(Command::Ack) ? WriteOutcome::Success
                                                              : WriteOutcome::Failure});
      pending_.reset();
      continue;
    }
    out.other.push_back(std::move(frame));
  }
  return out;
}

Bytes PortSession::request_tag_write(std::uint32_t uid, TagType type, Instant now) {
  if (pending_) throw Error(Errc::WriteInFlight, "a tag write is already awaiting its reply");
  if (!link_up_) throw Error(Errc::LinkDown, "reader link is down");
  pending_ = WriteTagRequest{uid, type};
  pending_since_ = now;
  return encode_frame(make_write_tag(*pending_));
}

std::optional<WriteResult> PortSession::expire(Instant now) {
  if (!pending_ || now - pending_since_ < write_timeout_) return std::nullopt;
  WriteResult result{*pending_, WriteOutcome::TimedOut};
  pending_.reset();
  return result;
}

void DetectionQueue::push(const Detection& d) {
  {
    std::lock_guard lock(mu_);
    items_.push_back(d);
  }
  cv_.notify_one();
}

std::optional<Detection> DetectionQueue::try_pop() {
  std::lock_guard lock(mu_);
  if (items_.empty()) return std::nullopt;
  Detection d = items_.front();
  items_.pop_front();
  return d;
}

std::optional<Detection> DetectionQueue::pop_for(std::chrono::milliseconds wait) {
  std::unique_lock lock(mu_);
  if (!cv_.wait_for(lock, wait, [&] { return !items_.empty(); })) return std::nullopt;
  Detection d = items_.front();
  items_.pop_front();
  return d;
}

std::size_t DetectionQueue::size() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

}  // namespace rfidac
