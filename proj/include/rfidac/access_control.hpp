#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rfidac/event_manager.hpp"
#include "rfidac/records.hpp"
#include "rfidac/store.hpp"

namespace rfidac {

/// Registration, tag assignment, reader/area configuration and the
/// Enter/Left state machine. All mutations go through one instance, which
/// must be the store's only writer.
class AccessControl {
 public:
  /// Rebuilds the per-(staff, area) presence state from the store's log.
  explicit AccessControl(Store& store);

  /// Throws Error(DuplicateStaffId). Any tag_uid in `details` is ignored;
  /// use assign_tag().
  StaffRecord register_person(StaffRecord details);

  /// Records a programmed tag in the tag table (replacing a prior record
  /// for the uid). Throws Error(Unprogrammed)/Error(IncompatibleTag).
  TagRecord record_tag(const TagRecord& tag);

  /// Throws Error(UnknownStaff), Error(Unprogrammed) when the uid is not a
  /// programmed tag on record, Error(TagAlreadyAssigned).
  StaffRecord assign_tag(const std::string& staff_id, std::uint32_t uid);

  AreaConfig configure_reader(std::uint8_t reader_id, const std::string& area_id);

  /// nullopt clears the allow-list (everyone with a tag may enter).
  AreaPolicy set_allow_list(const std::string& area_id,
                            std::optional<std::vector<std::string>> allow);

  /// Appends and returns the ENTER/LEFT/DENIED event for a detection.
  /// Throws Error(UnconfiguredReader).
  AccessEvent handle_detection(const Detection& detection, Instant now);

  /// Latest non-DENIED direction per (staff, area).
  std::optional<Direction> presence(const std::string& staff_id, const std::string& area_id) const;

  const Store& store() const noexcept { return store_; }

 private:
  Store& store_;
  std::map<std::pair<std::string, std::string>, Direction> presence_;
};

}  // namespace rfidac
