#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfidac/tag.hpp"
#include "rfidac/time.hpp"

namespace rfidac {

enum class PersonKind : std::uint8_t { Staff, Guest };
enum class Direction : std::uint8_t { Enter, Left, Denied };

std::string_view to_string(PersonKind kind) noexcept;
std::optional<PersonKind> parse_person_kind(std::string_view text) noexcept;

/// Upper-case wire/storage form: ENTER, LEFT, DENIED.
std::string_view to_string(Direction d) noexcept;
/// Report form: Enter, Left, Denied.
std::string_view display_name(Direction d) noexcept;
/// Accepts either form, case-insensitive.
std::optional<Direction> parse_direction(std::string_view text) noexcept;

/// Staff id recorded on DENIED events for tags assigned to nobody.
inline constexpr std::string_view kUnknownStaffId = "?";

struct StaffRecord {
  std::string staff_id;
  std::optional<std::uint32_t> tag_uid;
  std::string last_name;
  std::string first_name;
  std::string phone;
  PersonKind kind = PersonKind::Staff;

  friend bool operator==(const StaffRecord&, const StaffRecord&) = default;
};

struct AreaConfig {
  std::uint8_t reader_id = 0;
  std::string area_id;

  friend bool operator==(const AreaConfig&, const AreaConfig&) = default;
};

/// Access level of an area. Without an allow-list every assigned tag may enter.
struct AreaPolicy {
  std::string area_id;
  std::optional<std::vector<std::string>> allow;

  bool permits(std::string_view staff_id) const;

  friend bool operator==(const AreaPolicy&, const AreaPolicy&) = default;
};

struct AccessEvent {
  std::uint64_t seq = 0;
  std::string staff_id;
  Direction direction = Direction::Enter;
  std::string area_id;
  Instant timestamp{};
  std::uint32_t uid = 0;
  std::uint8_t reader_id = 0;

  friend bool operator==(const AccessEvent&, const AccessEvent&) = default;
};

struct EventFilter {
  std::optional<std::string> staff_id;
  std::optional<std::string> area_id;
  std::optional<Instant> from;  // inclusive
  std::optional<Instant> to;    // inclusive

  bool matches(const AccessEvent& e) const;
};

}  // namespace rfidac
