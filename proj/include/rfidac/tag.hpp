#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace rfidac {

enum class TagFamily : std::uint8_t { T5577Compatible, Other };
enum class TagType : std::uint8_t { Staff = 0, Guest = 1 };

std::string_view to_string(TagFamily family) noexcept;
std::string_view to_string(TagType type) noexcept;
std::optional<TagFamily> parse_tag_family(std::string_view text) noexcept;
/// Case-insensitive "staff" / "guest".
std::optional<TagType> parse_tag_type(std::string_view text) noexcept;

/// An emulated 125 kHz rewritable tag. `type` is meaningful only once programmed.
struct TagRecord {
  std::uint32_t uid = 0;
  TagFamily family = TagFamily::T5577Compatible;
  TagType type = TagType::Staff;
  bool programmed = false;

  friend bool operator==(const TagRecord&, const TagRecord&) = default;
};

TagRecord blank_tag(TagFamily family = TagFamily::T5577Compatible) noexcept;

/// Throws Error(IncompatibleTag) for non-T5577 tags. Reprogramming is allowed.
TagRecord program_tag(const TagRecord& tag, std::uint32_t uid, TagType type);

/// Throws Error(IncompatibleTag) or Error(Unprogrammed).
std::uint32_t read_uid(const TagRecord& tag);

/// Writes the source's payload onto `blank`; the source is untouched.
TagRecord copy_tag(const TagRecord& source, const TagRecord& blank);

}  // namespace rfidac
