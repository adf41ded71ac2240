#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "rfidac/protocol.hpp"
#include "rfidac/tag.hpp"
#include "rfidac/time.hpp"

namespace rfidac {

inline constexpr std::chrono::milliseconds kWriteTimeout{3000};

struct Detection {
  std::uint8_t reader_id = 0;
  std::uint32_t uid = 0;
  std::uint16_t emf_millivolts = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

enum class WriteOutcome { Success, Failure, TimedOut };

struct WriteResult {
  WriteTagRequest request;
  WriteOutcome outcome = WriteOutcome::Failure;

  friend bool operator==(const WriteResult&, const WriteResult&) = default;
};

struct IngestResult {
  std::vector<Detection> detections;
  std::vector<WriteResult> writes;
  /// Every other well-formed frame (PING/SET_SCAN replies, unknown commands).
  std::vector<Frame> other;
};

/// Host side of one reader link: reassembles frames from the inbound byte
/// stream and tracks the single outstanding tag write.
class PortSession {
 public:
  explicit PortSession(std::chrono::milliseconds write_timeout = kWriteTimeout)
      : write_timeout_(write_timeout) {}

  bool link_up() const noexcept { return link_up_; }
  void set_link_up(bool up) noexcept;

  /// Throws Error(LinkDown).
  IngestResult ingest(std::span<const std::uint8_t> bytes);

  /// Returns the encoded WRITE_TAG frame to send. Throws Error(WriteInFlight).
  Bytes request_tag_write(std::uint32_t uid, TagType type, Instant now);

  /// Resolves a pending write as TimedOut once the timeout has elapsed.
  std::optional<WriteResult> expire(Instant now);

  std::size_t defects() const noexcept { return defects_; }
  std::size_t buffered() const noexcept { return inbound_.size(); }
  const std::optional<WriteTagRequest>& pending_write() const noexcept { return pending_; }

 private:
  std::chrono::milliseconds write_timeout_;
  bool link_up_ = true;
  Bytes inbound_;
  std::size_t defects_ = 0;
  std::optional<WriteTagRequest> pending_;
  Instant pending_since_{};
};

/// Hand-off of detections to the application layer; any number of threads
/// may push or pop.
class DetectionQueue {
 public:
  void push(const Detection& d);
  std::optional<Detection> try_pop();
  std::optional<Detection> pop_for(std::chrono::milliseconds wait);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Detection> items_;
};

}  // namespace rfidac
