#include "rfidac/tag.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "rfidac/errors.hpp"

namespace rfidac {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

void require_compatible(const TagRecord& tag) {
  if (tag.family != TagFamily::T5577Compatible) {
    throw Error(Errc::IncompatibleTag, "tag family is not T5577-compatible");
  }
}

}  // namespace

std::string_view to_string(TagFamily family) noexcept {
  return family == TagFamily::T5577Compatible ? "T5577" : "OTHER";
}

std::string_view to_string(TagType type) noexcept {
  return type == TagType::Staff ? "STAFF" : "GUEST";
}

std::optional<TagFamily> parse_tag_family(std::string_view text) noexcept {
  if (iequals(text, "T5577") || iequals(text, "T5577_COMPATIBLE")) return TagFamily::T5577Compatible;
  if (iequals(text, "OTHER")) return TagFamily::Other;
  return std::nullopt;
}

std::optional<TagType> parse_tag_type(std::string_view text) noexcept {
  if (iequals(text, "STAFF")) return TagType::Staff;
  if (iequals(text, "GUEST")) return TagType::Guest;
  return std::nullopt;
}

TagRecord blank_tag(TagFamily family) noexcept {
  TagRecord tag;
  tag.family = family;
  return tag;
}

TagRecord program_tag(const TagRecord& tag, std::uint32_t uid, TagType type) {
  require_compatible(tag);
  TagRecord out = tag;
  out.uid = uid;
  out.type = type;
  out.programmed = true;
  return out;
}

std::uint32_t read_uid(const TagRecord& tag) {
  require_compatible(tag);
  if (!tag.programmed) throw Error(Errc::Unprogrammed, "tag has not been programmed");
  return tag.uid;
}

TagRecord copy_tag(const TagRecord& source, const TagRecord& blank) {
  const std::uint32_t uid = read_uid(source);
  return program_tag(blank, uid, source.type);
}

}  // namespace rfidac
