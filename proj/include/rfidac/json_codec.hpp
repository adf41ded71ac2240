#pragma once

// Single-line JSON forms shared by the store files and the HTTP surface.

#include "json.hpp"

#include "rfidac/records.hpp"
#include "rfidac/tag.hpp"

namespace rfidac {

using Json = nlohmann::ordered_json;

Json to_json(const StaffRecord& r);
Json to_json(const TagRecord& r);
Json to_json(const AreaConfig& r);
Json to_json(const AreaPolicy& r);
Json to_json(const AccessEvent& r);

// Throw Error(InvalidArgument) on missing or ill-typed fields.
StaffRecord staff_from_json(const Json& j);
TagRecord tag_from_json(const Json& j);
AreaConfig reader_from_json(const Json& j);
AreaPolicy area_from_json(const Json& j);
AccessEvent event_from_json(const Json& j);

}  // namespace rfidac
