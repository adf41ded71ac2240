#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "rfidac/access_control.hpp"
#include "rfidac/event_manager.hpp"
#include "rfidac/reader_sim.hpp"
#include "rfidac/reports.hpp"
#include "rfidac/store.hpp"

namespace rfidac {

enum class ClockMode { Real, Simulated };

std::optional<ClockMode> parse_clock_mode(std::string_view text) noexcept;

struct ServiceConfig {
  /// Empty keeps everything in memory.
  std::filesystem::path data_dir;
  std::string listen = "127.0.0.1:8080";
  double threshold_volts = kDefaultReadThresholdVolts;
  double holdoff_s = 2.0;
  int scan_period_ms = 250;
  ClockMode clock = ClockMode::Real;
  std::optional<std::filesystem::path> calibration_file;
  std::uint8_t reader_id = 1;
  /// Simulated clock origin; defaults to the wall clock at start-up.
  std::optional<Instant> sim_start;

  /// Throws Error(ConfigInvalid).
  void validate() const;
  std::chrono::milliseconds scan_period() const { return std::chrono::milliseconds(scan_period_ms); }
  std::chrono::milliseconds holdoff() const;
};

/// The running system without its network front end: store, access control,
/// reader simulator and the host port session wired through the byte codec.
///
/// Scan ticks fall on multiples of the scan period since the Unix epoch. A
/// command issued at instant T runs after every tick before T and before the
/// tick at T. All writes are serialised on one lock; queries take it shared.
class Engine {
 public:
  explicit Engine(const ServiceConfig& config);

  const ServiceConfig& config() const noexcept { return config_; }
  Instant now() const;
  /// Immutable after construction.
  const CouplingCalibration& calibration() const noexcept { return reader_.config().calibration; }

  /// Runs scan ticks up to (excluding) `t`. Throws Error(InvalidArgument)
  /// when `t` lies before the current clock.
  void advance_to(Instant t);
  /// Simulated clock only; Error(ClockMode) otherwise.
  Instant advance_by(std::chrono::milliseconds dt);
  Instant advance_sim_to(Instant t);
  /// Real clock only: catch up with the wall clock.
  void sync_wall_clock();

  StaffRecord register_person(const StaffRecord& details);
  /// Programs a fresh tag of `family` through the reader's write slot.
  /// Throws Error(IncompatibleTag) on a NAK for a non-T5577 tag,
  /// Error(WriteFailed) on any other failed write, Error(NotConnected).
  TagRecord program_tag(std::uint32_t uid, TagType type, TagFamily family = TagFamily::T5577Compatible);
  StaffRecord assign_tag(const std::string& staff_id, std::uint32_t uid);
  AreaConfig configure_reader(std::uint8_t reader_id, const std::string& area_id);
  AreaPolicy set_allow_list(const std::string& area_id, std::optional<std::vector<std::string>> allow);
  void set_scan(bool on);
  void set_connected(bool connected);
  /// Throws Error(Unprogrammed) unless the uid is a programmed tag on record.
  void place_tag(std::uint32_t uid, const AntennaPose& pose);
  void remove_tag(std::uint32_t uid);

  std::vector<StaffRecord> list_staff() const;
  StaffRecord get_staff(const std::string& staff_id) const;
  std::vector<TagRecord> list_tags() const;
  std::vector<AreaConfig> list_readers() const;
  std::vector<AreaPolicy> list_areas() const;
  std::vector<std::pair<std::uint32_t, FieldEntry>> field() const;
  ReaderFlags reader_flags() const;
  std::size_t link_defects() const;
  std::size_t dropped_detections() const;

  StatusSnapshot status(std::size_t recent_count = kDefaultRecentEvents) const;
  std::vector<AccessReportRow> report(const EventFilter& filter) const;
  std::size_t count(const std::string& staff_id, Date up_to) const;
  std::vector<AccessEvent> events_after(std::uint64_t after, std::size_t limit = SIZE_MAX) const;
  std::uint64_t last_seq() const;
  /// Blocks until an event with seq > after commits or the wait elapses.
  bool wait_for_events(std::uint64_t after, std::chrono::milliseconds wait) const;

 private:
  void advance_locked(Instant t);
  void run_tick(Instant t);
  void pump_reply(const Bytes& reply, Instant at);
  void publish(std::uint64_t seq);
  Instant grid_at_or_after(Instant t) const;

  ServiceConfig config_;
  Store store_;
  AccessControl access_;
  ReaderSim reader_;
  PortSession session_;

  mutable std::shared_mutex mu_;
  Instant clock_{};
  Instant next_tick_{};
  std::size_t dropped_detections_ = 0;
  std::optional<WriteResult> last_write_;

  mutable std::mutex event_mu_;
  mutable std::condition_variable event_cv_;
  std::uint64_t committed_seq_ = 0;
};

}  // namespace rfidac
