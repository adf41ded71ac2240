#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rfidac/records.hpp"
#include "rfidac/store.hpp"

namespace rfidac {

inline constexpr std::size_t kDefaultRecentEvents = 20;

struct AccessReportRow {
  std::string staff_id;
  Direction direction = Direction::Enter;
  std::string area_id;
  std::string date;  // dd/mm/yyyy
  std::string time;  // HH:MM:SS

  friend bool operator==(const AccessReportRow&, const AccessReportRow&) = default;
};

AccessReportRow render_row(const AccessEvent& event);

std::vector<AccessReportRow> access_report(const Store& store, const EventFilter& filter);

/// Header `Staff ID,Access,Accessed,Date,Time`, one line per row, `\n` endings.
std::string report_csv(std::span<const AccessReportRow> rows);

/// Non-DENIED events for the person dated on or before `up_to`.
/// Throws Error(UnknownStaff).
std::size_t access_count(const Store& store, const std::string& staff_id, Date up_to);

struct ReaderFlags {
  bool connected = false;
  bool scanning = false;
};

struct StatusSnapshot {
  bool connected = false;
  bool scanning = false;
  std::vector<AccessEvent> recent;                 // oldest first
  std::map<std::string, AccessEvent> last_access;  // by staff id
};

StatusSnapshot status_snapshot(const Store& store, ReaderFlags flags,
                               std::size_t recent_count = kDefaultRecentEvents);

}  // namespace rfidac
