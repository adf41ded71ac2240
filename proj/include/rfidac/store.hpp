#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfidac/records.hpp"
#include "rfidac/tag.hpp"

namespace rfidac {

/// Staff, tags, reader assignments, area policies and the access log.
///
/// A persistent store keeps one newline-delimited JSON file per table under
/// its directory (layout in STORAGE.md). Keyed tables are rewritten through a
/// temp file and rename; the access log is append-only and synced on every
/// append. Not internally synchronised: one writer, readers under the owner's lock.
class Store {
 public:
  /// Creates the directory if needed. Throws Error(ConfigInvalid) when it
  /// cannot be created or written, Error(StoreCorrupt) on unreadable records.
  static Store open(const std::filesystem::path& dir);
  static Store in_memory();

  Store(Store&&) noexcept;
  Store& operator=(Store&&) noexcept;
  ~Store();

  bool persistent() const noexcept;
  const std::filesystem::path& directory() const noexcept;

  // Staff. tag_uid must be unique among staff (Error(TagAlreadyAssigned)).
  void upsert_staff(const StaffRecord& record);
  std::optional<StaffRecord> find_staff(std::string_view staff_id) const;
  StaffRecord get_staff(std::string_view staff_id) const;  // Error(NotFound)
  std::optional<StaffRecord> find_staff_by_tag(std::uint32_t uid) const;
  const std::vector<StaffRecord>& staff() const noexcept;

  // Tags, keyed by uid.
  void upsert_tag(const TagRecord& record);
  std::optional<TagRecord> find_tag(std::uint32_t uid) const;
  TagRecord get_tag(std::uint32_t uid) const;
  const std::vector<TagRecord>& tags() const noexcept;

  // Reader -> area assignments, keyed by reader id.
  void upsert_reader(const AreaConfig& record);
  std::optional<AreaConfig> find_reader(std::uint8_t reader_id) const;
  AreaConfig get_reader(std::uint8_t reader_id) const;
  const std::vector<AreaConfig>& readers() const noexcept;

  // Area access policies, keyed by area id.
  void upsert_area(const AreaPolicy& record);
  std::optional<AreaPolicy> find_area(std::string_view area_id) const;
  const std::vector<AreaPolicy>& areas() const noexcept;

  /// Durable before returning. Throws Error(SequenceGap) unless
  /// event.seq == last_seq() + 1.
  void append_event(const AccessEvent& event);
  std::uint64_t last_seq() const noexcept;
  const std::vector<AccessEvent>& events() const noexcept;
  /// Matching events in seq order.
  std::vector<AccessEvent> query_events(const EventFilter& filter) const;
  /// Events with seq > after, at most `limit`.
  std::vector<AccessEvent> events_after(std::uint64_t after, std::size_t limit = SIZE_MAX) const;

 private:
  struct Impl;
  explicit Store(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace rfidac
