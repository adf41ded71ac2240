#include "rfidac/records.hpp"

#include <algorithm>
#include <cctype>

#include "rfidac/errors.hpp"
#include "rfidac/json_codec.hpp"

namespace rfidac {
namespace {

std::string upper(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
T field(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw Error(Errc::InvalidArgument, std::string("missing field '") + name + "'");
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::InvalidArgument, std::string("field '") + name + "' has the wrong type");
  }
}

std::string optional_text(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw Error(Errc::InvalidArgument, std::string("field '") + name + "' must be text");
  return it->get<std::string>();
}

std::uint32_t uid_field(const Json& j, const char* name) {
  const auto v = field<std::int64_t>(j, name);
  if (v < 0 || v > 0xFFFFFFFFll) throw Error(Errc::InvalidArgument, "uid must fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

std::uint8_t reader_id_field(const Json& j) {
  const auto v = field<std::int64_t>(j, "reader_id");
  if (v < 0 || v > 255) throw Error(Errc::InvalidArgument, "reader_id must be 0..255");
  return static_cast<std::uint8_t>(v);
}

}  // namespace

std::string_view to_string(PersonKind kind) noexcept {
  return kind == PersonKind::Staff ? "STAFF" : "GUEST";
}

std::optional<PersonKind> parse_person_kind(std::string_view text) noexcept {
  const auto u = upper(text);
  if (u == "STAFF") return PersonKind::Staff;
  if (u == "GUEST") return PersonKind::Guest;
  return std::nullopt;
}

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::Enter: return "ENTER";
    case Direction::Left: return "LEFT";
    case Direction::Denied: return "DENIED";
  }
  return "?";
}

std::string_view display_name(Direction d) noexcept {
  switch (d) {
    case Direction::Enter: return "Enter";
    case Direction::Left: return "Left";
    case Direction::Denied: return "Denied";
  }
  return "?";
}

std::optional<Direction> parse_direction(std::string_view text) noexcept {
  const auto u = upper(text);
  if (u == "ENTER") return Direction::Enter;
  if (u == "LEFT") return Direction::Left;
  if (u == "DENIED") return Direction::Denied;
  return std::nullopt;
}

bool AreaPolicy::permits(std::string_view staff_id) const {
  return !allow || std::find(allow->begin(), allow->end(), staff_id) != allow->end();
}

bool EventFilter::matches(const AccessEvent& e) const {
  if (staff_id && e.staff_id != *staff_id) return false;
  if (area_id && e.area_id != *area_id) return false;
  if (from && e.timestamp < *from) return false;
  if (to && e.timestamp > *to) return false;
  return true;
}

Json to_json(const StaffRecord& r) {
  Json j;
  j["staff_id"] = r.staff_id;
  j["tag_uid"] = r.tag_uid ? Json(*r.tag_uid) : Json(nullptr);
  j["last_name"] = r.last_name;
  j["first_name"] = r.first_name;
  j["phone"] = r.phone;
  j["kind"] = to_string(r.kind);
  return j;
}

Json to_json(const TagRecord& r) {
  Json j;
  j["uid"] = r.uid;
  j["family"] = to_string(r.family);
  j["tag_type"] = to_string(r.type);
  j["programmed"] = r.programmed;
  return j;
}

Json to_json(const AreaConfig& r) {
  Json j;
  j["reader_id"] = r.reader_id;
  j["area_id"] = r.area_id;
  return j;
}

Json to_json(const AreaPolicy& r) {
  Json j;
  j["area_id"] = r.area_id;
  j["allow"] = r.allow ? Json(*r.allow) : Json(nullptr);
  return j;
}

Json to_json(const AccessEvent& r) {
  Json j;
  j["seq"] = r.seq;
  j["staff_id"] = r.staff_id;
  j["direction"] = to_string(r.direction);
  j["area_id"] = r.area_id;
  j["timestamp"] = format_iso8601(r.timestamp);
  j["uid"] = r.uid;
  j["reader_id"] = r.reader_id;
  return j;
}

StaffRecord staff_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "staff record must be an object");
  StaffRecord r;
  r.staff_id = field<std::string>(j, "staff_id");
  if (r.staff_id.empty()) throw Error(Errc::InvalidArgument, "staff_id must not be empty");
  if (const auto it = j.find("tag_uid"); it != j.end() && !it->is_null()) r.tag_uid = uid_field(j, "tag_uid");
  r.last_name = optional_text(j, "last_name");
  r.first_name = optional_text(j, "first_name");
  r.phone = optional_text(j, "phone");
  const auto kind_text = optional_text(j, "kind");
  const auto kind = kind_text.empty() ? std::optional(PersonKind::Staff) : parse_person_kind(kind_text);
  if (!kind) throw Error(Errc::InvalidArgument, "kind must be STAFF or GUEST");
  r.kind = *kind;
  return r;
}

TagRecord tag_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "tag record must be an object");
  TagRecord r;
  r.uid = uid_field(j, "uid");
  const auto family = parse_tag_family(field<std::string>(j, "family"));
  const auto type = parse_tag_type(field<std::string>(j, "tag_type"));
  if (!family || !type) throw Error(Errc::InvalidArgument, "bad tag family or type");
  r.family = *family;
  r.type = *type;
  r.programmed = field<bool>(j, "programmed");
  return r;
}

AreaConfig reader_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "reader record must be an object");
  AreaConfig r;
  r.reader_id = reader_id_field(j);
  r.area_id = field<std::string>(j, "area_id");
  if (r.area_id.empty()) throw Error(Errc::InvalidArgument, "area_id must not be empty");
  return r;
}

AreaPolicy area_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "area record must be an object");
  AreaPolicy r;
  r.area_id = field<std::string>(j, "area_id");
  if (const auto it = j.find("allow"); it != j.end() && !it->is_null()) {
    r.allow = field<std::vector<std::string>>(j, "allow");
  }
  return r;
}

AccessEvent event_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "event record must be an object");
  AccessEvent r;
  r.seq = field<std::uint64_t>(j, "seq");
  r.staff_id = field<std::string>(j, "staff_id");
  const auto dir = parse_direction(field<std::string>(j, "direction"));
  if (!dir) throw Error(Errc::InvalidArgument, "bad direction");
  r.direction = *dir;
  r.area_id = field<std::string>(j, "area_id");
  r.timestamp = parse_iso8601(field<std::string>(j, "timestamp"));
  r.uid = uid_field(j, "uid");
  r.reader_id = reader_id_field(j);
  return r;
}

}  // namespace rfidac
