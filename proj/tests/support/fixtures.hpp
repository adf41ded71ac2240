#pragma once

// Staff table, status-window and access-report rows from the two-day pilot
// run, plus helpers to load them into a store.

#include <string>
#include <vector>

#include "rfidac/access_control.hpp"
#include "rfidac/store.hpp"

namespace rfidac::testing {

struct PilotStaff {
  const char* staff_id;
  std::uint32_t uid;
  const char* last_name;
  const char* first_name;
  const char* phone;
  PersonKind kind;
};

inline const std::vector<PilotStaff>& pilot_staff() {
  static const std::vector<PilotStaff> rows{
      {"SS/408", 416, "KASSIM", "Shakiru O.", "+2348069169216", PersonKind::Staff},
      {"JS/729", 7319, "ISA", "Hassan B.", "+2348038986930", PersonKind::Staff},
      {"SS/453", 3865, "HARRAM", "Ibrahim M.", "+2348035097470", PersonKind::Staff},
      {"SS/579", 13446, "ZUBAIRU", "Aminu", "+2348060903528", PersonKind::Staff},
      {"SS/709", 1033, "SAMAILA", "Aisha I.", "+2348105307925", PersonKind::Staff},
      {"SS/784", 27804, "ISA", "Abdullahi A.", "+2349030273716", PersonKind::Staff},
      {"GS-221", 51723, "GUEST-1", "", "", PersonKind::Guest},
      {"GS-222", 30018, "GUEST-2", "", "", PersonKind::Guest},
  };
  return rows;
}

struct LoggedAccess {
  const char* staff_id;
  const char* access;
  const char* date;
  const char* time;
};

/// The status window (reader status and accesses).
inline const std::vector<LoggedAccess>& status_window_rows() {
  static const std::vector<LoggedAccess> rows{
      {"JS/729", "Enter", "23/09/2021", "15:21:18"}, {"SS/709", "Left", "23/09/2021", "16:14:36"},
      {"JS/729", "Left", "23/09/2021", "16:53:24"},  {"SS/408", "Enter", "24/09/2021", "08:28:17"},
      {"SS/453", "Enter", "24/09/2021", "09:11:38"}, {"JS/729", "Enter", "24/09/2021", "09:19:44"},
      {"SS/453", "Left", "24/09/2021", "10:05:15"},  {"SS/408", "Left", "24/09/2021", "11:56:48"},
      {"SS/579", "Enter", "24/09/2021", "11:58:04"}, {"SS/579", "Left", "24/09/2021", "13:05:26"},
      {"JS/729", "Left", "24/09/2021", "15:09:16"},
  };
  return rows;
}

/// The access report window, area "Res. Centre", dates zero-padded.
inline const std::vector<LoggedAccess>& access_report_rows() {
  static const std::vector<LoggedAccess> rows{
      {"JS/729", "Left", "23/09/2021", "16:53:24"},  {"SS/408", "Enter", "24/09/2021", "08:28:17"},
      {"SS/453", "Enter", "24/09/2021", "09:11:38"}, {"JS/729", "Enter", "24/09/2021", "09:19:44"},
      {"SS/453", "Left", "24/09/2021", "10:05:15"},  {"SS/408", "Left", "24/09/2021", "11:56:48"},
      {"SS/579", "Enter", "24/09/2021", "11:58:04"}, {"SS/579", "Left", "24/09/2021", "13:05:26"},
      {"JS/729", "Left", "24/09/2021", "15:09:16"},  {"JS/729", "Enter", "25/09/2021", "09:19:38"},
      {"GS-221", "Enter", "25/09/2021", "10:03:51"}, {"SS/784", "Enter", "25/09/2021", "10:11:08"},
      {"GS-221", "Left", "25/09/2021", "10:11:29"},  {"SS/709", "Enter", "25/09/2021", "12:09:53"},
      {"SS/709", "Left", "25/09/2021", "12:28:33"},  {"SS/784", "Left", "25/09/2021", "17:00:12"},
  };
  return rows;
}

inline constexpr const char* kPilotArea = "Res. Centre";

/// Registers the pilot staff with programmed, assigned tags and maps reader 1.
inline void seed_pilot(AccessControl& access) {
  access.configure_reader(1, kPilotArea);
  for (const auto& s : pilot_staff()) {
    StaffRecord r;
    r.staff_id = s.staff_id;
    r.last_name = s.last_name;
    r.first_name = s.first_name;
    r.phone = s.phone;
    r.kind = s.kind;
    access.register_person(r);
    access.record_tag(program_tag(blank_tag(), s.uid,
                                  s.kind == PersonKind::Staff ? TagType::Staff : TagType::Guest));
    access.assign_tag(s.staff_id, s.uid);
  }
}

/// Appends the union of both windows (status rows, then the report rows that
/// follow them) directly to the log, as committed events.
inline void append_pilot_log(Store& store) {
  std::vector<LoggedAccess> rows = status_window_rows();
  const auto& report = access_report_rows();
  rows.insert(rows.end(), report.begin() + 9, report.end());
  for (const auto& row : rows) {
    AccessEvent e;
    e.seq = store.last_seq() + 1;
    e.staff_id = row.staff_id;
    e.direction = *parse_direction(row.access);
    e.area_id = kPilotArea;
    e.timestamp = parse_report_datetime(row.date, row.time);
    e.reader_id = 1;
    if (const auto staff = store.find_staff(row.staff_id); staff && staff->tag_uid) e.uid = *staff->tag_uid;
    store.append_event(e);
  }
}

}  // namespace rfidac::testing
