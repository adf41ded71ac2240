#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rfidac/engine.hpp"
#include "rfidac/reports.hpp"

namespace rfidac {

/// One script line: `<ISO-8601 instant> <verb> <args...>`. Grammar and verbs
/// are documented in SCENARIOS.md.
struct ScenarioStep {
  int line = 0;
  Instant at{};
  std::string verb;
  std::vector<std::string> args;
};

struct Scenario {
  std::vector<ScenarioStep> steps;
  /// From the last `report` line; empty filter when absent.
  EventFilter report_filter;
};

/// Splits on whitespace; double quotes group words, `#` outside quotes ends
/// the line. Throws Error(ScriptParseError) on an unterminated quote.
std::vector<std::string> tokenize_line(std::string_view line, int line_no = 0);

/// Validates verbs, arity, argument syntax and timestamp ordering.
/// Throws Error(ScriptParseError) naming the line.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& file);

struct ReplayResult {
  std::vector<AccessReportRow> report;
  std::string csv;
  std::size_t events = 0;
};

/// Runs the script against a simulated clock starting at its first
/// timestamp. `base` supplies the data dir and tuning; its clock settings
/// are overridden. A failing step throws Error with the step's code and a
/// "line N:" prefix.
ReplayResult replay_scenario(const Scenario& scenario, ServiceConfig base = {});

}  // namespace rfidac
