#include "rfidac/reports.hpp"

#include <algorithm>

#include "rfidac/errors.hpp"

namespace rfidac {
namespace {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

AccessReportRow render_row(const AccessEvent& e) {
  return {e.staff_id, e.direction, e.area_id, format_report_date(e.timestamp),
          format_report_time(e.timestamp)};
}

std::vector<AccessReportRow> access_report(const Store& store, const EventFilter& filter) {
  std::vector<AccessReportRow> rows;
  for (const auto& e : store.query_events(filter)) rows.push_back(render_row(e));
  return rows;
}

std::string report_csv(std::span<const AccessReportRow> rows) {
  std::string out = "Staff ID,Access,Accessed,Date,Time\n";
  for (const auto& r : rows) {
    out += csv_field(r.staff_id);
    out += ',';
    out += display_name(r.direction);
    out += ',';
    out += csv_field(r.area_id);
    out += ',';
    out += r.date;
    out += ',';
    out += r.time;
    out += '\n';
  }
  return out;
}

std::size_t access_count(const Store& store, const std::string& staff_id, Date up_to) {
  if (!store.find_staff(staff_id)) throw Error(Errc::UnknownStaff, "no staff record '" + staff_id + "'");
  const auto& events = store.events();
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const AccessEvent& e) {
    return e.staff_id == staff_id && e.direction != Direction::Denied && date_of(e.timestamp) <= up_to;
  }));
}

StatusSnapshot status_snapshot(const Store& store, ReaderFlags flags, std::size_t recent_count) {
  StatusSnapshot snap;
  snap.connected = flags.connected;
  snap.scanning = flags.scanning;
  const auto& events = store.events();
  const std::size_t first = events.size() > recent_count ? events.size() - recent_count : 0;
  snap.recent.assign(events.begin() + static_cast<std::ptrdiff_t>(first), events.end());
  for (const auto& e : events) {
    if (e.staff_id != kUnknownStaffId) snap.last_access.insert_or_assign(e.staff_id, e);
  }
  return snap;
}

}  // namespace rfidac
