#include "rfidac/access_control.hpp"

#include "rfidac/errors.hpp"

namespace rfidac {

AccessControl::AccessControl(Store& store) : store_(store) {
  for (const auto& e : store_.events()) {
    if (e.direction != Direction::Denied) presence_[{e.staff_id, e.area_id}] = e.direction;
  }
}

StaffRecord AccessControl::register_person(StaffRecord details) {
  if (details.staff_id.empty()) throw Error(Errc::InvalidArgument, "staff_id must not be empty");
  if (store_.find_staff(details.staff_id)) {
    throw Error(Errc::DuplicateStaffId, "staff id '" + details.staff_id + "' already registered");
  }
  details.tag_uid.reset();
  store_.upsert_staff(details);
  return details;
}

TagRecord AccessControl::record_tag(const TagRecord& tag) {
  read_uid(tag);
  store_.upsert_tag(tag);
  return tag;
}

StaffRecord AccessControl::assign_tag(const std::string& staff_id, std::uint32_t uid) {
  auto person = store_.find_staff(staff_id);
  if (!person) throw Error(Errc::UnknownStaff, "no staff record '" + staff_id + "'");
  const auto tag = store_.find_tag(uid);
  if (!tag || !tag->programmed) {
    throw Error(Errc::Unprogrammed, "tag " + std::to_string(uid) + " has not been programmed");
  }
  if (const auto owner = store_.find_staff_by_tag(uid); owner && owner->staff_id != staff_id) {
    throw Error(Errc::TagAlreadyAssigned,
                "tag " + std::to_string(uid) + " is assigned to " + owner->staff_id);
  }
  person->tag_uid = uid;
  store_.upsert_staff(*person);
  return *person;
}

AreaConfig AccessControl::configure_reader(std::uint8_t reader_id, const std::string& area_id) {
  AreaConfig config{reader_id, area_id};
  store_.upsert_reader(config);
  return config;
}

AreaPolicy AccessControl::set_allow_list(const std::string& area_id,
                                         std::optional<std::vector<std::string>> allow) {
  AreaPolicy policy{area_id, std::move(allow)};
  store_.upsert_area(policy);
  return policy;
}

AccessEvent AccessControl::handle_detection(const Detection& detection, Instant now) {
  const auto reader = store_.find_reader(detection.reader_id);
  if (!reader) {
    throw Error(Errc::UnconfiguredReader,
                "reader " + std::to_string(detection.reader_id) + " has no area assigned");
  }

  AccessEvent event;
  event.seq = store_.last_seq() + 1;
  event.area_id = reader->area_id;
  event.timestamp = now;
  event.uid = detection.uid;
  event.reader_id = detection.reader_id;

  const auto person = store_.find_staff_by_tag(detection.uid);
  const auto policy = store_.find_area(reader->area_id);
  if (!person) {
    event.staff_id = std::string(kUnknownStaffId);
    event.direction = Direction::Denied;
  } else if (policy && !policy->permits(person->staff_id)) {
    event.staff_id = person->staff_id;
    event.direction = Direction::Denied;
  } else {
    event.staff_id = person->staff_id;
    const auto last = presence(person->staff_id, reader->area_id);
    event.direction = (!last || *last == Direction::Left) ? Direction::Enter : Direction::Left;
  }

  store_.append_event(event);
  if (event.direction != Direction::Denied) presence_[{event.staff_id, event.area_id}] = event.direction;
  return event;
}

std::optional<Direction> AccessControl::presence(const std::string& staff_id,
                                                 const std::string& area_id) const {
  const auto it = presence_.find({staff_id, area_id});
  if (it == presence_.end()) return std::nullopt;
  return it->second;
}

}  // namespace rfidac
