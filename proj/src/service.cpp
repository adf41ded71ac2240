#include "rfidac/service.hpp"

#include <httplib.h>

#include "rfidac/errors.hpp"
#include "rfidac/json_codec.hpp"

namespace rfidac {
namespace {

using std::chrono::milliseconds;

int http_status(Errc code) {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::PayloadTooLong:
    case Errc::ConfigInvalid:
    case Errc::ScriptParseError:
      return 400;
    case Errc::NotFound:
    case Errc::UnknownStaff:
      return 404;
    case Errc::WriteFailed:
      return 502;
    case Errc::StoreCorrupt:
      return 500;
    default:
      return 409;
  }
}

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump() + "\n", "application/json");
}

void send_error(httplib::Response& res, Errc code, const std::string& message) {
  Json body;
  body["error"] = to_string(code);
  body["message"] = message;
  send_json(res, body, http_status(code));
}

Json parse_body(const httplib::Request& req) {
  try {
    auto j = Json::parse(req.body.empty() ? std::string("{}") : req.body);
    if (!j.is_object()) throw Error(Errc::InvalidArgument, "request body must be a JSON object");
    return j;
  } catch (const Json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed JSON body: ") + e.what());
  }
}

template <typename T>
T body_field(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw Error(Errc::InvalidArgument, std::string("missing field '") + name + "'");
  try {
    return it->template get<T>();
  } catch (const Json::exception&) {
    throw Error(Errc::InvalidArgument, std::string("field '") + name + "' has the wrong type");
  }
}

std::uint32_t body_uid(const Json& j) {
  const auto v = body_field<std::int64_t>(j, "uid");
  if (v < 0 || v > 0xFFFFFFFFll) throw Error(Errc::InvalidArgument, "uid must fit in 32 bits");
  return static_cast<std::uint32_t>(v);
}

std::optional<std::string> query(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  auto v = req.get_param_value(key);
  if (v.empty()) return std::nullopt;
  return v;
}

std::uint64_t query_u64(const httplib::Request& req, const char* key, std::uint64_t fallback) {
  const auto v = query(req, key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    const auto n = std::stoull(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return n;
  } catch (const std::exception&) {
    throw Error(Errc::InvalidArgument, std::string("query parameter '") + key + "' must be a number");
  }
}

EventFilter filter_from(const httplib::Request& req) {
  EventFilter f;
  f.staff_id = query(req, "staff");
  f.area_id = query(req, "area");
  if (const auto v = query(req, "from")) f.from = parse_instant(*v);
  if (const auto v = query(req, "to")) f.to = parse_instant(*v);
  return f;
}

Json rows_json(const std::vector<AccessReportRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["staff_id"] = r.staff_id;
    j["access"] = display_name(r.direction);
    j["accessed"] = r.area_id;
    j["date"] = r.date;
    j["time"] = r.time;
    out.push_back(std::move(j));
  }
  return out;
}

template <typename T>
Json list_json(const std::vector<T>& items) {
  Json out = Json::array();
  for (const auto& item : items) out.push_back(to_json(item));
  return out;
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

// Maps library errors onto HTTP error bodies.
Handler guarded(Handler inner) {
  return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
    try {
      inner(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, Errc::InvalidArgument, e.what());
    }
  };
}

}  // namespace

std::pair<std::string, int> parse_listen_address(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == listen.size()) {
    throw Error(Errc::ConfigInvalid, "listen address must be host:port, got '" + listen + "'");
  }
  const auto host = listen.substr(0, colon);
  int port = -1;
  try {
    std::size_t used = 0;
    port = std::stoi(listen.substr(colon + 1), &used);
    if (used != listen.size() - colon - 1) port = -1;
  } catch (const std::exception&) {
    port = -1;
  }
  if (port < 0 || port > 65535) throw Error(Errc::ConfigInvalid, "bad port in listen address '" + listen + "'");
  return {host, port};
}

Service::Service(const ServiceConfig& config)
    : engine_(std::make_unique<Engine>(config)), server_(std::make_unique<httplib::Server>()) {
  parse_listen_address(config.listen);
  install_routes();
}

Service::~Service() { stop(); }

int Service::start() {
  const auto [host, port] = parse_listen_address(engine_->config().listen);
  port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ < 0) throw Error(Errc::ConfigInvalid, "cannot listen on " + engine_->config().listen);
  running_ = true;
  server_thread_ = std::thread([this] { server_->listen_after_bind(); });
  if (engine_->config().clock == ClockMode::Real) {
    driver_thread_ = std::thread([this] {
      const auto period = engine_->config().scan_period();
      while (running_) {
        engine_->sync_wall_clock();
        std::this_thread::sleep_for(period);
      }
    });
  }
  server_->wait_until_ready();
  return port_;
}

void Service::wait() {
  if (server_thread_.joinable()) server_thread_.join();
}

void Service::stop() {
  running_ = false;
  if (server_) server_->stop();
  if (server_thread_.joinable() && server_thread_.get_id() != std::this_thread::get_id()) server_thread_.join();
  if (driver_thread_.joinable()) driver_thread_.join();
}

void Service::install_routes() {
  auto& srv = *server_;
  Engine& eng = *engine_;

  srv.Get("/health", guarded([&eng](const httplib::Request&, httplib::Response& res) {
    Json j;
    j["status"] = "ok";
    j["clock"] = eng.config().clock == ClockMode::Real ? "real" : "sim";
    j["now"] = format_iso8601(eng.now());
    send_json(res, j);
  }));

  srv.Get("/staff", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    if (const auto id = query(req, "id")) {
      send_json(res, to_json(eng.get_staff(*id)));
    } else {
      send_json(res, list_json(eng.list_staff()));
    }
  }));

  srv.Post("/staff", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    send_json(res, to_json(eng.register_person(staff_from_json(parse_body(req)))), 201);
  }));

  srv.Get("/tags", guarded([&eng](const httplib::Request&, httplib::Response& res) {
    send_json(res, list_json(eng.list_tags()));
  }));

  srv.Post("/tags/program", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto type = parse_tag_type(body_field<std::string>(body, "tag_type"));
    if (!type) throw Error(Errc::InvalidArgument, "tag_type must be STAFF or GUEST");
    auto family = std::optional(TagFamily::T5577Compatible);
    if (body.contains("family")) family = parse_tag_family(body_field<std::string>(body, "family"));
    if (!family) throw Error(Errc::InvalidArgument, "family must be T5577 or OTHER");
    send_json(res, to_json(eng.program_tag(body_uid(body), *type, *family)), 201);
  }));

  srv.Post("/tags/assign", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    send_json(res, to_json(eng.assign_tag(body_field<std::string>(body, "staff_id"), body_uid(body))));
  }));

  srv.Get("/readers", guarded([&eng](const httplib::Request&, httplib::Response& res) {
    send_json(res, list_json(eng.list_readers()));
  }));

  srv.Post("/readers", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto id = body_field<std::int64_t>(body, "reader_id");
    if (id < 0 || id > 255) throw Error(Errc::InvalidArgument, "reader_id must be 0..255");
    send_json(res, to_json(eng.configure_reader(static_cast<std::uint8_t>(id),
                                                body_field<std::string>(body, "area_id"))));
  }));

  srv.Get("/areas", guarded([&eng](const httplib::Request&, httplib::Response& res) {
    send_json(res, list_json(eng.list_areas()));
  }));

  srv.Post("/areas/allow", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    std::optional<std::vector<std::string>> allow;
    if (body.contains("allow") && !body["allow"].is_null()) {
      allow = body_field<std::vector<std::string>>(body, "allow");
    }
    send_json(res, to_json(eng.set_allow_list(body_field<std::string>(body, "area_id"), std::move(allow))));
  }));

  const auto flags_json = [&eng] {
    const auto flags = eng.reader_flags();
    Json j;
    j["connected"] = flags.connected;
    j["scanning"] = flags.scanning;
    return j;
  };

  srv.Post("/reader/scan", guarded([&eng, flags_json](const httplib::Request& req, httplib::Response& res) {
    eng.set_scan(body_field<bool>(parse_body(req), "on"));
    send_json(res, flags_json());
  }));

  srv.Post("/reader/connection", guarded([&eng, flags_json](const httplib::Request& req, httplib::Response& res) {
    eng.set_connected(body_field<bool>(parse_body(req), "connected"));
    send_json(res, flags_json());
  }));

  srv.Get("/sim/field", guarded([&eng](const httplib::Request&, httplib::Response& res) {
    Json out = Json::array();
    for (const auto& [uid, entry] : eng.field()) {
      Json j;
      j["uid"] = uid;
      j["distance_cm"] = entry.pose.distance_cm();
      j["angle_deg"] = entry.pose.angle_deg();
      out.push_back(std::move(j));
    }
    send_json(res, out);
  }));

  srv.Post("/sim/place", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const AntennaPose pose(body_field<double>(body, "distance_cm"), body_field<double>(body, "angle_deg"));
    eng.place_tag(body_uid(body), pose);
    Json j;
    j["uid"] = body_uid(body);
    j["emf_volts"] = induced_emf(pose, eng.calibration());
    j["readable"] = can_read(pose, eng.calibration());
    send_json(res, j);
  }));

  srv.Post("/sim/remove", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto uid = body_uid(parse_body(req));
    eng.remove_tag(uid);
    Json j;
    j["uid"] = uid;
    send_json(res, j);
  }));

  srv.Get("/status", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto snap = eng.status(query_u64(req, "recent", kDefaultRecentEvents));
    Json j;
    j["connected"] = snap.connected;
    j["scanning"] = snap.scanning;
    j["defects"] = eng.link_defects();
    j["recent"] = list_json(snap.recent);
    Json last = Json::array();
    for (const auto& [id, e] : snap.last_access) last.push_back(to_json(e));
    j["last_access"] = std::move(last);
    send_json(res, j);
  }));

  srv.Get("/report", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto rows = eng.report(filter_from(req));
    if (query(req, "format").value_or("json") == "csv") {
      res.set_content(report_csv(rows), "text/csv");
    } else {
      send_json(res, rows_json(rows));
    }
  }));

  srv.Get("/count", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto staff = query(req, "staff");
    const auto date = query(req, "date");
    if (!staff || !date) throw Error(Errc::InvalidArgument, "count needs staff and date");
    Json j;
    j["staff_id"] = *staff;
    j["date"] = *date;
    j["count"] = eng.count(*staff, parse_report_date(*date));
    send_json(res, j);
  }));

  srv.Get("/events", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    send_json(res, list_json(eng.events_after(query_u64(req, "after", 0))));
  }));

  srv.Get("/events/stream", guarded([this, &eng](const httplib::Request& req, httplib::Response& res) {
    auto cursor = std::make_shared<std::uint64_t>(query_u64(req, "after", 0));
    res.set_chunked_content_provider(
        "application/x-ndjson", [this, &eng, cursor](std::size_t, httplib::DataSink& sink) {
          if (!running_) {
            sink.done();
            return true;
          }
          auto batch = eng.events_after(*cursor, 256);
          if (batch.empty()) {
            eng.wait_for_events(*cursor, milliseconds(250));
            batch = eng.events_after(*cursor, 256);
          }
          if (batch.empty()) {
            // keep-alive so a vanished client is noticed
            return sink.is_writable();
          }
          std::string chunk;
          for (const auto& e : batch) {
            chunk += to_json(e).dump();
            chunk += '\n';
            *cursor = e.seq;
          }
          return sink.write(chunk.data(), chunk.size());
        });
  }));

  srv.Post("/clock/advance", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    Instant now;
    if (body.contains("to")) {
      now = eng.advance_sim_to(parse_instant(body_field<std::string>(body, "to")));
    } else {
      now = eng.advance_by(milliseconds(body_field<std::int64_t>(body, "by_ms")));
    }
    Json j;
    j["now"] = format_iso8601(now);
    send_json(res, j);
  }));

  srv.Get("/emf", guarded([&eng](const httplib::Request& req, httplib::Response& res) {
    const auto d = query(req, "distance_cm");
    const auto a = query(req, "angle_deg");
    if (!d || !a) throw Error(Errc::InvalidArgument, "emf needs distance_cm and angle_deg");
    const AntennaPose pose(std::stod(*d), std::stod(*a));
    const auto& cal = eng.calibration();
    Json j;
    j["distance_cm"] = pose.distance_cm();
    j["angle_deg"] = normalize_angle(pose.angle_deg());
    j["emf_volts"] = induced_emf(pose, cal);
    j["readable"] = can_read(pose, cal);
    send_json(res, j);
  }));
}

}  // namespace rfidac
