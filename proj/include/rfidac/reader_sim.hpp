#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rfidac/protocol.hpp"
#include "rfidac/rf_coupling.hpp"
#include "rfidac/tag.hpp"
#include "rfidac/time.hpp"

namespace rfidac {

inline constexpr std::chrono::milliseconds kDefaultHoldoff{2000};
inline constexpr std::chrono::milliseconds kDefaultScanPeriod{250};

struct ReaderConfig {
  std::uint8_t reader_id = 1;
  std::chrono::milliseconds holdoff = kDefaultHoldoff;
  CouplingCalibration calibration = CouplingCalibration::bench_defaults();
};

struct FieldEntry {
  TagRecord tag;
  AntennaPose pose;
};

/// Fixed single-antenna interrogator. Time is injected through tick(); the
/// simulator never reads a clock.
class ReaderSim {
 public:
  explicit ReaderSim(ReaderConfig config = {});

  std::uint8_t reader_id() const noexcept { return config_.reader_id; }
  const ReaderConfig& config() const noexcept { return config_; }
  bool scanning() const noexcept { return scanning_; }
  bool connected() const noexcept { return connected_; }
  const std::map<std::uint32_t, FieldEntry>& field() const noexcept { return field_; }
  const std::map<std::uint32_t, Instant>& holdoff() const noexcept { return holdoff_; }

  /// Throws Error(Unprogrammed) (or IncompatibleTag) for tags the reader cannot read.
  void place_tag(const TagRecord& tag, const AntennaPose& pose);
  void remove_tag(std::uint32_t uid) noexcept;

  /// Throws Error(NotConnected). Turning scanning off clears the holdoff table.
  void set_scan(bool on);
  /// Disconnecting also stops scanning.
  void set_connected(bool connected) noexcept;

  /// One scan period. Emits at most one TAG_DETECTED: the strongest readable
  /// tag not in holdoff, lowest uid on ties.
  std::vector<Frame> tick(Instant now);

  /// Blank tag lying on the programming pad; WRITE_TAG programs it.
  void load_write_slot(const TagRecord& tag) noexcept { write_slot_ = tag; }
  const std::optional<TagRecord>& write_slot() const noexcept { return write_slot_; }
  std::optional<TagRecord> take_write_slot() noexcept;

  /// Host -> reader byte stream. Handles PING, SET_SCAN and WRITE_TAG and
  /// returns the encoded ACK/NAK replies. Ignored while disconnected.
  Bytes receive(std::span<const std::uint8_t> bytes);

 private:
  Frame handle(const Frame& frame);

  ReaderConfig config_;
  bool scanning_ = false;
  bool connected_ = true;
  std::map<std::uint32_t, FieldEntry> field_;
  std::map<std::uint32_t, Instant> holdoff_;
  std::optional<TagRecord> write_slot_;
  Bytes inbound_;
};

}  // namespace rfidac
