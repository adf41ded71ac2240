#include "rfidac/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "rfidac/errors.hpp"

namespace rfidac {
namespace {

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(Errc::ScriptParseError, "line " + std::to_string(line) + ": " + what);
}

struct VerbShape {
  std::size_t min_args;
  std::size_t max_args;
};

const std::map<std::string, VerbShape, std::less<>>& verbs() {
  static const std::map<std::string, VerbShape, std::less<>> table{
      {"register", {2, 5}},  {"program", {2, 3}}, {"assign", {2, 2}},
      {"configure", {2, 2}}, {"allow", {2, SIZE_MAX}}, {"scan", {1, 1}},
      {"connect", {1, 1}},   {"place", {3, 3}},   {"remove", {1, 1}},
      {"advance", {0, 0}},   {"report", {0, 4}},
  };
  return table;
}

std::uint32_t to_uid(const std::string& text, int line) {
  std::uint32_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) parse_error(line, "bad uid '" + text + "'");
  return v;
}

std::uint8_t to_reader_id(const std::string& text, int line) {
  unsigned v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v > 255) {
    parse_error(line, "bad reader id '" + text + "'");
  }
  return static_cast<std::uint8_t>(v);
}

double to_number(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  parse_error(line, "bad number '" + text + "'");
}

bool to_switch(const std::string& text, int line) {
  if (text == "on") return true;
  if (text == "off") return false;
  parse_error(line, "expected on/off, got '" + text + "'");
}

EventFilter to_filter(const std::vector<std::string>& args, int line) {
  EventFilter f;
  for (const auto& arg : args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) parse_error(line, "report options are key=value, got '" + arg + "'");
    const auto key = arg.substr(0, eq);
    const auto value = arg.substr(eq + 1);
    try {
      if (key == "staff") {
        f.staff_id = value;
      } else if (key == "area") {
        f.area_id = value;
      } else if (key == "from") {
        f.from = parse_instant(value);
      } else if (key == "to") {
        f.to = parse_instant(value);
      } else {
        parse_error(line, "unknown report option '" + key + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Errc::ScriptParseError) throw;
      parse_error(line, e.what());
    }
  }
  return f;
}

// Argument syntax is checked up front so a bad script fails before any step runs.
void check_args(const ScenarioStep& s) {
  const auto& a = s.args;
  if (s.verb == "register") {
    if (!parse_person_kind(a[1])) parse_error(s.line, "kind must be STAFF or GUEST");
  } else if (s.verb == "program") {
    to_uid(a[0], s.line);
    if (!parse_tag_type(a[1])) parse_error(s.line, "tag type must be STAFF or GUEST");
    if (a.size() > 2 && !parse_tag_family(a[2])) parse_error(s.line, "family must be T5577 or OTHER");
  } else if (s.verb == "assign") {
    to_uid(a[1], s.line);
  } else if (s.verb == "configure") {
    to_reader_id(a[0], s.line);
  } else if (s.verb == "scan" || s.verb == "connect") {
    to_switch(a[0], s.line);
  } else if (s.verb == "place") {
    to_uid(a[0], s.line);
    to_number(a[1], s.line);
    to_number(a[2], s.line);
  } else if (s.verb == "remove") {
    to_uid(a[0], s.line);
  } else if (s.verb == "report") {
    to_filter(a, s.line);
  }
}

void run_step(Engine& engine, const ScenarioStep& s) {
  const auto& a = s.args;
  if (s.verb == "register") {
    StaffRecord r;
    r.staff_id = a[0];
    r.kind = *parse_person_kind(a[1]);
    if (a.size() > 2) r.last_name = a[2];
    if (a.size() > 3) r.first_name = a[3];
    if (a.size() > 4) r.phone = a[4];
    engine.register_person(r);
  } else if (s.verb == "program") {
    engine.program_tag(to_uid(a[0], s.line), *parse_tag_type(a[1]),
                       a.size() > 2 ? *parse_tag_family(a[2]) : TagFamily::T5577Compatible);
  } else if (s.verb == "assign") {
    engine.assign_tag(a[0], to_uid(a[1], s.line));
  } else if (s.verb == "configure") {
    engine.configure_reader(to_reader_id(a[0], s.line), a[1]);
  } else if (s.verb == "allow") {
    std::optional<std::vector<std::string>> allow;
    if (!(a.size() == 2 && a[1] == "-")) allow.emplace(a.begin() + 1, a.end());
    engine.set_allow_list(a[0], std::move(allow));
  } else if (s.verb == "scan") {
    engine.set_scan(to_switch(a[0], s.line));
  } else if (s.verb == "connect") {
    engine.set_connected(to_switch(a[0], s.line));
  } else if (s.verb == "place") {
    engine.place_tag(to_uid(a[0], s.line), AntennaPose(to_number(a[1], s.line), to_number(a[2], s.line)));
  } else if (s.verb == "remove") {
    engine.remove_tag(to_uid(a[0], s.line));
  }
  // advance: the timestamp already moved the clock; report: applied at the end
}

}  // namespace

std::vector<std::string> tokenize_line(std::string_view line, int line_no) {
  std::vector<std::string> tokens;
  std::string current;
  bool in_token = false;
  bool quoted = false;
  for (const char c : line) {
    if (quoted) {
      if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
      in_token = true;
    } else if (c == '#') {
      break;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      if (in_token) {
        tokens.push_back(std::move(current));
        current.clear();
        in_token = false;
      }
    } else {
      current += c;
      in_token = true;
    }
  }
  if (quoted) parse_error(line_no, "unterminated quote");
  if (in_token) tokens.push_back(std::move(current));
  return tokens;
}

Scenario parse_scenario(std::istream& in) {
  Scenario scenario;
  std::string line;
  int line_no = 0;
  std::optional<Instant> previous;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize_line(line, line_no);
    if (tokens.empty()) continue;
    ScenarioStep step;
    step.line = line_no;
    try {
      step.at = parse_iso8601(tokens[0]);
    } catch (const Error&) {
      parse_error(line_no, "expected an ISO-8601 timestamp, got '" + tokens[0] + "'");
    }
    if (previous && step.at < *previous) parse_error(line_no, "timestamps must not decrease");
    previous = step.at;
    if (tokens.size() < 2) parse_error(line_no, "missing command");
    step.verb = tokens[1];
    const auto shape = verbs().find(step.verb);
    if (shape == verbs().end()) parse_error(line_no, "unknown command '" + step.verb + "'");
    step.args.assign(tokens.begin() + 2, tokens.end());
    if (step.args.size() < shape->second.min_args || step.args.size() > shape->second.max_args) {
      parse_error(line_no, "wrong number of arguments for '" + step.verb + "'");
    }
    check_args(step);
    if (step.verb == "report") scenario.report_filter = to_filter(step.args, line_no);
    scenario.steps.push_back(std::move(step));
  }
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::ScriptParseError, "cannot open scenario " + file.string());
  return parse_scenario(in);
}

ReplayResult replay_scenario(const Scenario& scenario, ServiceConfig base) {
  base.clock = ClockMode::Simulated;
  base.sim_start = scenario.steps.empty() ? Instant{} : scenario.steps.front().at;
  Engine engine(base);
  for (const auto& step : scenario.steps) {
    try {
      engine.advance_to(step.at);
      run_step(engine, step);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(step.line) + ": " + e.what());
    }
  }
  ReplayResult result;
  result.report = engine.report(scenario.report_filter);
  result.csv = report_csv(result.report);
  result.events = engine.last_seq();
  return result;
}

}  // namespace rfidac
