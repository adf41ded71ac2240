#include "rfidac/engine.hpp"

#include <cmath>

#include "rfidac/errors.hpp"

namespace rfidac {
namespace {

using std::chrono::milliseconds;

Instant wall_now() {
  return std::chrono::time_point_cast<milliseconds>(std::chrono::system_clock::now());
}

CouplingCalibration make_calibration(const ServiceConfig& c) {
  return c.calibration_file ? CouplingCalibration::load(*c.calibration_file, c.threshold_volts)
                            : CouplingCalibration::bench_defaults(c.threshold_volts);
}

Store open_store(const ServiceConfig& c) {
  return c.data_dir.empty() ? Store::in_memory() : Store::open(c.data_dir);
}

const ServiceConfig& validated(const ServiceConfig& c) {
  c.validate();
  return c;
}

}  // namespace

std::optional<ClockMode> parse_clock_mode(std::string_view text) noexcept {
  if (text == "real") return ClockMode::Real;
  if (text == "sim" || text == "simulated") return ClockMode::Simulated;
  return std::nullopt;
}

void ServiceConfig::validate() const {
  if (!(threshold_volts > 0.0) || !std::isfinite(threshold_volts)) {
    throw Error(Errc::ConfigInvalid, "threshold volts must be > 0");
  }
  if (!(holdoff_s > 0.0) || !std::isfinite(holdoff_s)) {
    throw Error(Errc::ConfigInvalid, "holdoff seconds must be > 0");
  }
  if (scan_period_ms <= 0) throw Error(Errc::ConfigInvalid, "scan period must be > 0 ms");
  if (listen.empty()) throw Error(Errc::ConfigInvalid, "listen address must not be empty");
}

std::chrono::milliseconds ServiceConfig::holdoff() const {
  return milliseconds(static_cast<std::int64_t>(std::llround(holdoff_s * 1000.0)));
}

Engine::Engine(const ServiceConfig& config)
    : config_(validated(config)),
      store_(open_store(config_)),
      access_(store_),
      reader_(ReaderConfig{config_.reader_id, config_.holdoff(), make_calibration(config_)}) {
  clock_ = config_.clock == ClockMode::Simulated && config_.sim_start ? *config_.sim_start : wall_now();
  next_tick_ = grid_at_or_after(clock_);
  committed_seq_ = store_.last_seq();
}

Instant Engine::grid_at_or_after(Instant t) const {
  const auto period = config_.scan_period().count();
  const auto ms = t.time_since_epoch().count();
  auto k = ms / period;
  if (k * period < ms) ++k;
  return Instant{milliseconds(k * period)};
}

Instant Engine::now() const {
  std::shared_lock lock(mu_);
  return clock_;
}

void Engine::advance_to(Instant t) {
  std::unique_lock lock(mu_);
  advance_locked(t);
}

Instant Engine::advance_by(milliseconds dt) {
  std::unique_lock lock(mu_);
  if (config_.clock != ClockMode::Simulated) throw Error(Errc::ClockMode, "clock advance needs the simulated clock");
  if (dt.count() < 0) throw Error(Errc::InvalidArgument, "cannot advance by a negative duration");
  advance_locked(clock_ + dt);
  return clock_;
}

Instant Engine::advance_sim_to(Instant t) {
  std::unique_lock lock(mu_);
  if (config_.clock != ClockMode::Simulated) throw Error(Errc::ClockMode, "clock advance needs the simulated clock");
  advance_locked(t);
  return clock_;
}

void Engine::sync_wall_clock() {
  std::unique_lock lock(mu_);
  if (config_.clock == ClockMode::Real) advance_locked(std::max(clock_, wall_now()));
}

void Engine::advance_locked(Instant t) {
  if (t < clock_) {
    throw Error(Errc::InvalidArgument,
                "time cannot move backwards (" + format_iso8601(t) + " < " + format_iso8601(clock_) + ")");
  }
  const auto period = config_.scan_period();
  while (next_tick_ < t) {
    if (!reader_.scanning() || reader_.field().empty()) {
      // Nothing can be emitted until a command changes the reader or field.
      next_tick_ = grid_at_or_after(t);
      break;
    }
    run_tick(next_tick_);
    next_tick_ += period;
  }
  if (auto expired = session_.expire(t)) last_write_ = expired;
  clock_ = t;
}

void Engine::run_tick(Instant t) {
  Bytes wire;
  for (const auto& frame : reader_.tick(t)) {
    const auto bytes = encode_frame(frame);
    wire.insert(wire.end(), bytes.begin(), bytes.end());
  }
  if (wire.empty()) return;
  pump_reply(wire, t);
}

void Engine::pump_reply(const Bytes& bytes, Instant at) {
  if (!session_.link_up()) return;
  auto result = session_.ingest(bytes);
  for (const auto& det : result.detections) {
    try {
      const auto event = access_.handle_detection(det, at);
      publish(event.seq);
    } catch (const Error& e) {
      if (e.code() != Errc::UnconfiguredReader) throw;
      ++dropped_detections_;
    }
  }
  if (!result.writes.empty()) last_write_ = result.writes.back();
}

void Engine::publish(std::uint64_t seq) {
  {
    std::lock_guard lock(event_mu_);
    committed_seq_ = seq;
  }
  event_cv_.notify_all();
}

StaffRecord Engine::register_person(const StaffRecord& details) {
  std::unique_lock lock(mu_);
  if (config_.clock == ClockMode::Real) advance_locked(std::max(clock_, wall_now()));
  return access_.register_person(details);
}

TagRecord Engine::program_tag(std::uint32_t uid, TagType type, TagFamily family) {
  std::unique_lock lock(mu_);
  if (config_.clock == ClockMode::Real) advance_locked(std::max(clock_, wall_now()));
  if (!reader_.connected()) throw Error(Errc::NotConnected, "reader is not connected");
  reader_.load_write_slot(blank_tag(family));
  last_write_.reset();
  const auto request = session_.request_tag_write(uid, type, clock_);
  pump_reply(reader_.receive(request), clock_);
  auto slot = reader_.take_write_slot();
  if (!last_write_ || last_write_->outcome != WriteOutcome::Success || !slot) {
    if (session_.pending_write()) session_.expire(clock_ + kWriteTimeout);
    if (family != TagFamily::T5577Compatible) {
      throw Error(Errc::IncompatibleTag, "reader rejected the tag: family is not T5577-compatible");
    }
    throw Error(Errc::WriteFailed, "tag write for uid " + std::to_string(uid) + " was not acknowledged");
  }
  return access_.record_tag(*slot);
}

StaffRecord Engine::assign_tag(const std::string& staff_id, std::uint32_t uid) {
  std::unique_lock lock(mu_);
  return access_.assign_tag(staff_id, uid);
}

AreaConfig Engine::configure_reader(std::uint8_t reader_id, const std::string& area_id) {
  std::unique_lock lock(mu_);
  if (area_id.empty()) throw Error(Errc::InvalidArgument, "area_id must not be empty");
  return access_.configure_reader(reader_id, area_id);
}

AreaPolicy Engine::set_allow_list(const std::string& area_id, std::optional<std::vector<std::string>> allow) {
  std::unique_lock lock(mu_);
  if (area_id.empty()) throw Error(Errc::InvalidArgument, "area_id must not be empty");
  return access_.set_allow_list(area_id, std::move(allow));
}

void Engine::set_scan(bool on) {
  std::unique_lock lock(mu_);
  if (config_.clock == ClockMode::Real) advance_locked(std::max(clock_, wall_now()));
  if (!reader_.connected()) throw Error(Errc::NotConnected, "reader is not connected");
  pump_reply(reader_.receive(encode_frame(make_set_scan(on))), clock_);
  if (reader_.scanning() != on) throw Error(Errc::NotConnected, "reader did not acknowledge SET_SCAN");
  next_tick_ = grid_at_or_after(clock_);
}

void Engine::set_connected(bool connected) {
  std::unique_lock lock(mu_);
  if (config_.clock == ClockMode::Real) advance_locked(std::max(clock_, wall_now()));
  reader_.set_connected(connected);
  session_.set_link_up(connected);
}

void Engine::place_tag(std::uint32_t uid, const AntennaPose& pose) {
  std::unique_lock lock(mu_);
  if (config_.clock == ClockMode::Real) advance_locked(std::max(clock_, wall_now()));
  const auto tag = store_.find_tag(uid);
  if (!tag || !tag->programmed) {
    throw Error(Errc::Unprogrammed, "no programmed tag with uid " + std::to_string(uid));
  }
  reader_.place_tag(*tag, pose);
  next_tick_ = grid_at_or_after(clock_);
}

void Engine::remove_tag(std::uint32_t uid) {
  std::unique_lock lock(mu_);
  if (config_.clock == ClockMode::Real) advance_locked(std::max(clock_, wall_now()));
  reader_.remove_tag(uid);
}

std::vector<StaffRecord> Engine::list_staff() const {
  std::shared_lock lock(mu_);
  return store_.staff();
}

StaffRecord Engine::get_staff(const std::string& staff_id) const {
  std::shared_lock lock(mu_);
  return store_.get_staff(staff_id);
}

std::vector<TagRecord> Engine::list_tags() const {
  std::shared_lock lock(mu_);
  return store_.tags();
}

std::vector<AreaConfig> Engine::list_readers() const {
  std::shared_lock lock(mu_);
  return store_.readers();
}

std::vector<AreaPolicy> Engine::list_areas() const {
  std::shared_lock lock(mu_);
  return store_.areas();
}

std::vector<std::pair<std::uint32_t, FieldEntry>> Engine::field() const {
  std::shared_lock lock(mu_);
  return {reader_.field().begin(), reader_.field().end()};
}

ReaderFlags Engine::reader_flags() const {
  std::shared_lock lock(mu_);
  return {reader_.connected(), reader_.scanning()};
}

std::size_t Engine::link_defects() const {
  std::shared_lock lock(mu_);
  return session_.defects();
}

std::size_t Engine::dropped_detections() const {
  std::shared_lock lock(mu_);
  return dropped_detections_;
}

StatusSnapshot Engine::status(std::size_t recent_count) const {
  std::shared_lock lock(mu_);
  return status_snapshot(store_, {reader_.connected(), reader_.scanning()}, recent_count);
}

std::vector<AccessReportRow> Engine::report(const EventFilter& filter) const {
  std::shared_lock lock(mu_);
  return access_report(store_, filter);
}

std::size_t Engine::count(const std::string& staff_id, Date up_to) const {
  std::shared_lock lock(mu_);
  return access_count(store_, staff_id, up_to);
}

std::vector<AccessEvent> Engine::events_after(std::uint64_t after, std::size_t limit) const {
  std::shared_lock lock(mu_);
  return store_.events_after(after, limit);
}

std::uint64_t Engine::last_seq() const {
  std::shared_lock lock(mu_);
  return store_.last_seq();
}

bool Engine::wait_for_events(std::uint64_t after, milliseconds wait) const {
  std::unique_lock lock(event_mu_);
  return event_cv_.wait_for(lock, wait, [&] { return committed_seq_ > after; });
}

}  // namespace rfidac
