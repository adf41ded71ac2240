// rfidac: run the access-control service, replay scenario scripts, or drive
// a running service from the shell.

#include <CLI11.hpp>
#include <httplib.h>

#include <pthread.h>

#include <csignal>
#include <fstream>
#include <iostream>

#include "rfidac/errors.hpp"
#include "rfidac/json_codec.hpp"
#include "rfidac/rf_coupling.hpp"
#include "rfidac/scenario.hpp"
#include "rfidac/service.hpp"

namespace {

using rfidac::Json;

struct ClientOptions {
  std::string server = "http://127.0.0.1:8080";
};

int print_response(const httplib::Result& res, bool raw = false) {
  if (!res) {
    std::cerr << "error: request failed: " << httplib::to_string(res.error()) << "\n";
    return 2;
  }
  if (raw || res->get_header_value("Content-Type").rfind("application/json", 0) != 0) {
    std::cout << res->body;
  } else {
    try {
      std::cout << Json::parse(res->body).dump(2) << "\n";
    } catch (const Json::exception&) {
      std::cout << res->body;
    }
  }
  return res->status >= 200 && res->status < 300 ? 0 : 1;
}

int post(const ClientOptions& o, const std::string& path, const Json& body) {
  httplib::Client cli(o.server);
  return print_response(cli.Post(path, body.dump(), "application/json"));
}

int get(const ClientOptions& o, const std::string& path, const httplib::Params& params = {},
        bool raw = false) {
  httplib::Client cli(o.server);
  return print_response(cli.Get(path, params, httplib::Headers{}), raw);
}

// CLI-side view of the options that need conversion before landing in ServiceConfig.
struct ServiceFlags {
  std::string clock = "real";
  std::string calibration;
  int reader_id = 1;
};

void add_service_flags(CLI::App* cmd, rfidac::ServiceConfig& cfg, ServiceFlags& flags) {
  cmd->add_option("--data-dir", cfg.data_dir, "Directory for the store files (empty: in memory)");
  cmd->add_option("--threshold-volts", cfg.threshold_volts, "Minimum induced EMF for a read")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--holdoff-s", cfg.holdoff_s, "Repeat-detection suppression window")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--scan-period-ms", cfg.scan_period_ms, "Reader scan period")->check(CLI::PositiveNumber);
  cmd->add_option("--reader-id", flags.reader_id, "Simulated reader id")->check(CLI::Range(0, 255));
  cmd->add_option("--calibration", flags.calibration, "Coupling table file (distance angle emf per line)");
  cmd->add_option("--clock", flags.clock, "Clock mode")->check(CLI::IsMember({"real", "sim"}));
}

void finish_config(rfidac::ServiceConfig& cfg, const ServiceFlags& flags) {
  cfg.clock = *rfidac::parse_clock_mode(flags.clock);
  cfg.reader_id = static_cast<std::uint8_t>(flags.reader_id);
  if (!flags.calibration.empty()) cfg.calibration_file = flags.calibration;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RFID access-control service and tools"};
  app.require_subcommand(1);

  rfidac::ServiceConfig cfg;
  ServiceFlags flags;

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  add_service_flags(serve, cfg, flags);
  serve->add_option("--listen", cfg.listen, "host:port to listen on");

  // replay
  auto* replay = app.add_subcommand("replay", "Run a scenario script and print its access report");
  std::string script;
  std::string replay_format = "csv";
  std::string replay_out;
  replay->add_option("script", script, "Scenario file")->required()->check(CLI::ExistingFile);
  replay->add_option("--format", replay_format)->check(CLI::IsMember({"csv", "json"}));
  replay->add_option("-o,--out", replay_out, "Write the report here instead of stdout");
  add_service_flags(replay, cfg, flags);

  // emf
  auto* emf = app.add_subcommand("emf", "Evaluate the coupling model at one pose");
  double distance = 0;
  double angle = 0;
  emf->add_option("--distance", distance, "cm")->required();
  emf->add_option("--angle", angle, "degrees")->required();
  emf->add_option("--threshold-volts", cfg.threshold_volts)->check(CLI::PositiveNumber);
  emf->add_option("--calibration", flags.calibration);

  // client verbs
  ClientOptions client;
  const auto client_cmd = [&](const std::string& name, const std::string& desc) {
    auto* c = app.add_subcommand(name, desc);
    c->add_option("--server", client.server, "Service base URL");
    return c;
  };

  auto* health = client_cmd("health", "Check that the service answers");

  auto* reg = client_cmd("register", "Register a staff member or guest");
  std::string staff_id, kind = "STAFF", last_name, first_name, phone;
  reg->add_option("staff_id", staff_id)->required();
  reg->add_option("--kind", kind)->check(CLI::IsMember({"STAFF", "GUEST", "staff", "guest"}));
  reg->add_option("--last-name", last_name);
  reg->add_option("--first-name", first_name);
  reg->add_option("--phone", phone);

  auto* staff = client_cmd("staff", "List staff, or show one with --id");
  std::string staff_query;
  staff->add_option("--id", staff_query);

  auto* tags = client_cmd("tags", "List programmed tags");

  auto* program = client_cmd("program", "Program a blank tag through the reader");
  std::uint32_t uid = 0;
  std::string tag_type = "STAFF", family = "T5577";
  program->add_option("uid", uid)->required();
  program->add_option("--type", tag_type)->check(CLI::IsMember({"STAFF", "GUEST", "staff", "guest"}));
  program->add_option("--family", family)->check(CLI::IsMember({"T5577", "OTHER"}));

  auto* assign = client_cmd("assign", "Assign a programmed tag to a person");
  assign->add_option("staff_id", staff_id)->required();
  assign->add_option("uid", uid)->required();

  auto* configure = client_cmd("configure", "Assign a reader to an area");
  int reader_id = 1;
  std::string area;
  configure->add_option("reader_id", reader_id)->required()->check(CLI::Range(0, 255));
  configure->add_option("area", area)->required();

  auto* readers = client_cmd("readers", "List reader assignments");

  auto* allow = client_cmd("allow", "Restrict an area to the listed staff ids (none: open)");
  std::vector<std::string> allow_ids;
  allow->add_option("area", area)->required();
  allow->add_option("staff_ids", allow_ids);

  auto* scan = client_cmd("scan", "Turn reader scanning on or off");
  std::string onoff;
  scan->add_option("state", onoff)->required()->check(CLI::IsMember({"on", "off"}));

  auto* connect = client_cmd("connect", "Connect or disconnect the reader link");
  connect->add_option("state", onoff)->required()->check(CLI::IsMember({"on", "off"}));

  auto* place = client_cmd("place", "Present a tag to the simulated reader");
  place->add_option("uid", uid)->required();
  place->add_option("--distance", distance, "cm")->required();
  place->add_option("--angle", angle, "degrees")->default_val(0.0);

  auto* remove = client_cmd("remove", "Take a tag out of the reader field");
  remove->add_option("uid", uid)->required();

  auto* field = client_cmd("field", "List tags currently in the reader field");

  auto* status = client_cmd("status", "Reader flags and recent accesses");
  int recent = static_cast<int>(rfidac::kDefaultRecentEvents);
  status->add_option("--recent", recent)->check(CLI::NonNegativeNumber);

  auto* report = client_cmd("report", "Access report");
  std::string r_staff, r_area, r_from, r_to, r_format = "csv";
  report->add_option("--staff", r_staff);
  report->add_option("--area", r_area);
  report->add_option("--from", r_from, "ISO-8601 or dd/mm/yyyy [HH:MM:SS]");
  report->add_option("--to", r_to);
  report->add_option("--format", r_format)->check(CLI::IsMember({"csv", "json"}));

  auto* count = client_cmd("count", "Number of accesses by a person up to a date");
  std::string date;
  count->add_option("staff_id", staff_id)->required();
  count->add_option("date", date, "dd/mm/yyyy")->required();

  auto* events = client_cmd("events", "Committed events after a sequence number");
  std::uint64_t after = 0;
  events->add_option("--after", after);

  auto* watch = client_cmd("watch", "Follow the live event stream");
  watch->add_option("--after", after);

  auto* advance = client_cmd("advance", "Advance the simulated clock");
  std::int64_t by_ms = 0;
  std::string to;
  auto* by_opt = advance->add_option("--by-ms", by_ms);
  auto* to_opt = advance->add_option("--to", to, "ISO-8601 instant");
  by_opt->excludes(to_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve->parsed()) {
      finish_config(cfg, flags);
      // Block the stop signals before any thread starts so only sigwait sees them.
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
      rfidac::Service service(cfg);
      const int port = service.start();
      std::cerr << "rfidac listening on port " << port << "\n";
      int received = 0;
      sigwait(&stop_signals, &received);
      service.stop();
      return 0;
    }
    if (replay->parsed()) {
      finish_config(cfg, flags);
      const auto result = rfidac::replay_scenario(rfidac::load_scenario(script), cfg);
      std::string text = result.csv;
      if (replay_format == "json") {
        Json rows = Json::array();
        for (const auto& r : result.report) {
          rows.push_back({{"staff_id", r.staff_id},
                          {"access", rfidac::display_name(r.direction)},
                          {"accessed", r.area_id},
                          {"date", r.date},
                          {"time", r.time}});
        }
        text = rows.dump(2) + "\n";
      }
      if (replay_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(replay_out) << text;
      }
      return 0;
    }
    if (emf->parsed()) {
      const auto cal = flags.calibration.empty()
                           ? rfidac::CouplingCalibration::bench_defaults(cfg.threshold_volts)
                           : rfidac::CouplingCalibration::load(flags.calibration, cfg.threshold_volts);
      const rfidac::AntennaPose pose(distance, angle);
      std::cout << "emf_volts=" << rfidac::induced_emf(pose, cal)
                << " readable=" << (rfidac::can_read(pose, cal) ? "yes" : "no") << "\n";
      return 0;
    }

    if (health->parsed()) return get(client, "/health");
    if (reg->parsed()) {
      return post(client, "/staff",
                  {{"staff_id", staff_id}, {"kind", kind}, {"last_name", last_name},
                   {"first_name", first_name}, {"phone", phone}});
    }
    if (staff->parsed()) {
      return staff_query.empty() ? get(client, "/staff") : get(client, "/staff", {{"id", staff_query}});
    }
    if (tags->parsed()) return get(client, "/tags");
    if (program->parsed()) {
      return post(client, "/tags/program", {{"uid", uid}, {"tag_type", tag_type}, {"family", family}});
    }
    if (assign->parsed()) return post(client, "/tags/assign", {{"staff_id", staff_id}, {"uid", uid}});
    if (configure->parsed()) return post(client, "/readers", {{"reader_id", reader_id}, {"area_id", area}});
    if (readers->parsed()) return get(client, "/readers");
    if (allow->parsed()) {
      Json body{{"area_id", area}};
      body["allow"] = allow_ids.empty() ? Json(nullptr) : Json(allow_ids);
      return post(client, "/areas/allow", body);
    }
    if (scan->parsed()) return post(client, "/reader/scan", {{"on", onoff == "on"}});
    if (connect->parsed()) return post(client, "/reader/connection", {{"connected", onoff == "on"}});
    if (place->parsed()) {
      return post(client, "/sim/place", {{"uid", uid}, {"distance_cm", distance}, {"angle_deg", angle}});
    }
    if (remove->parsed()) return post(client, "/sim/remove", {{"uid", uid}});
    if (field->parsed()) return get(client, "/sim/field");
    if (status->parsed()) return get(client, "/status", {{"recent", std::to_string(recent)}});
    if (report->parsed()) {
      httplib::Params params{{"format", r_format}};
      if (!r_staff.empty()) params.emplace("staff", r_staff);
      if (!r_area.empty()) params.emplace("area", r_area);
      if (!r_from.empty()) params.emplace("from", r_from);
      if (!r_to.empty()) params.emplace("to", r_to);
      return get(client, "/report", params, r_format == "csv");
    }
    if (count->parsed()) return get(client, "/count", {{"staff", staff_id}, {"date", date}});
    if (events->parsed()) return get(client, "/events", {{"after", std::to_string(after)}});
    if (watch->parsed()) {
      httplib::Client cli(client.server);
      cli.set_read_timeout(std::chrono::hours(24));
      auto res = cli.Get("/events/stream", {{"after", std::to_string(after)}}, httplib::Headers{},
                         [](const char* data, std::size_t len) {
                           std::cout.write(data, static_cast<std::streamsize>(len));
                           std::cout.flush();
                           return true;
                         });
      return res ? 0 : 2;
    }
    if (advance->parsed()) {
      return to.empty() ? post(client, "/clock/advance", {{"by_ms", by_ms}})
                        : post(client, "/clock/advance", {{"to", to}});
    }
  } catch (const rfidac::Error& e) {
    std::cerr << "error: " << rfidac::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
