#include <httplib.h>

#include <atomic>
#include <semaphore>

#include "json_codec.hpp"
#include "wayfind/error.hpp"
#include "wayfind/service.hpp"

namespace wayfind {

namespace {

using detail::ordered_json;
using json = nlohmann::json;

constexpr std::string_view kProtocol = "wayfind-service/1";

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  ordered_json body;
  body["protocol"] = kProtocol;
  body["error"]["code"] = std::string(error_code_name(code));
  body["error"]["message"] = message;
  send_json(res, http_status_for(code), body);
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "request body must be a JSON object");
  }
  return body;
}

Endpoint endpoint_from(const json& j, const BuildingMap& map) {
  if (j.is_string()) return parse_endpoint(j.get<std::string>(), map);
  if (j.is_object()) return detail::node_from(j);
  throw Error(ErrorCode::kInvalidArgument, "endpoint must be a POI name or {floor,i,j}");
}

ordered_json bundle_json(const BuildingMap& map) {
  return ordered_json::parse(serialize_bundle(map));
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownMap:
    case ErrorCode::kUnknownPoi:
    case ErrorCode::kUnknownFloor:
      return 404;
    case ErrorCode::kWouldOrphanPoiOrPortal:
    case ErrorCode::kDuplicatePoi:
    case ErrorCode::kValidationFailure:
      return 409;
    case ErrorCode::kNoPath:
    case ErrorCode::kStartBlocked:
    case ErrorCode::kGoalBlocked:
    case ErrorCode::kNodeBlocked:
    case ErrorCode::kSameEndpoints:
      return 422;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParseError:
    case ErrorCode::kOutOfBounds:
      return 400;
    case ErrorCode::kTimeout:
    case ErrorCode::kEndpointUnavailable:
    case ErrorCode::kMalformedResponse:
      return 502;
    default:
      return 500;
  }
}

struct Server::Impl {
  Impl(MapStore& s, ServerOptions o)
      : store(s), options(std::move(o)), lm_slots(std::max(1, options.max_inflight_lm)) {}

  MapStore& store;
  ServerOptions options;
  std::counting_semaphore<1024> lm_slots;
  httplib::Server http;
  std::atomic<int> bound_port{-1};

  template <class Fn>
  void guarded(httplib::Response& res, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, ErrorCode::kInvalidArgument, e.what());
    } catch (const std::exception& e) {
      send_error(res, ErrorCode::kInternal, e.what());
    }
  }

  void mutation_reply(httplib::Response& res, const std::string& id, const MapStore::Snapshot& snap) {
    ordered_json body;
    body["protocol"] = kProtocol;
    body["id"] = id;
    body["revision"] = snap.revision;
    send_json(res, 200, body);
  }

  void install_routes() {
    http.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
      ordered_json body;
      body["protocol"] = kProtocol;
      body["status"] = "ok";
      send_json(res, 200, body);
    });

    http.Get("/v1/maps", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] {
        ordered_json body;
        body["protocol"] = kProtocol;
        body["maps"] = ordered_json::array();
        for (const std::string& id : store.ids()) {
          const auto snap = store.get(id);
          ordered_json m;
          m["id"] = id;
          m["name"] = snap.map->name;
          m["floors"] = snap.map->floors.size();
          m["revision"] = snap.revision;
          body["maps"].push_back(std::move(m));
        }
        send_json(res, 200, body);
      });
    });

    http.Get(R"(/v1/maps/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string id = req.matches[1];
        const auto snap = store.get(id);
        ordered_json body;
        body["protocol"] = kProtocol;
        body["id"] = id;
        body["revision"] = snap.revision;
        body["bundle"] = bundle_json(*snap.map);
        send_json(res, 200, body);
      });
    });

    http.Post(R"(/v1/maps/([^/]+)/cells)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string id = req.matches[1];
        const json body = parse_body(req);
        const FloorId floor = body.at("floor").get<FloorId>();
        const CellCoord cell{body.at("i").get<int>(), body.at("j").get<int>()};
        const bool free = body.at("free").get<bool>();
        const auto snap = store.update(id, [&](const BuildingMap& m) { return set_cell(m, floor, cell, free); });
        mutation_reply(res, id, snap);
      });
    });

    http.Post(R"(/v1/maps/([^/]+)/pois)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string id = req.matches[1];
        const json body = parse_body(req);
        Poi poi{body.at("name").get<std::string>(), detail::node_from(body)};
        const auto snap = store.update(id, [&](const BuildingMap& m) { return add_poi(m, poi); });
        mutation_reply(res, id, snap);
      });
    });

    http.Delete(R"(/v1/maps/([^/]+)/pois/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string id = req.matches[1];
        const std::string name = httplib::detail::decode_url(req.matches[2], false);
        const auto snap = store.update(id, [&](const BuildingMap& m) { return remove_poi(m, name); });
        mutation_reply(res, id, snap);
      });
    });

    http.Post(R"(/v1/maps/([^/]+)/portals)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string id = req.matches[1];
        const json body = parse_body(req);
        Portal portal;
        const auto kind_text = body.at("kind").get<std::string>();
        const auto kind = parse_portal_kind(kind_text);
        if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown portal kind '" + kind_text + "'");
        portal.kind = *kind;
        portal.a = detail::node_from(body.at("a"));
        portal.b = detail::node_from(body.at("b"));
        portal.cost = body.value("cost", 1.0);
        const auto snap = store.update(id, [&](const BuildingMap& m) { return add_portal(m, portal); });
        mutation_reply(res, id, snap);
      });
    });

    http.Delete(R"(/v1/maps/([^/]+)/portals/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string id = req.matches[1];
        const std::size_t index = std::stoul(req.matches[2]);
        const auto snap = store.update(id, [&](const BuildingMap& m) { return remove_portal(m, index); });
        mutation_reply(res, id, snap);
      });
    });

    http.Post(R"(/v1/maps/([^/]+)/route)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string id = req.matches[1];
        const json body = parse_body(req);
        const auto snap = store.get(id);  // pinned for the whole query
        RouteRequest request;
        request.origin = endpoint_from(body.at("origin"), *snap.map);
        request.destination = endpoint_from(body.at("destination"), *snap.map);
        if (body.contains("corner_rule")) {
          const auto text = body["corner_rule"].get<std::string>();
          const auto rule = parse_corner_rule(text);
          if (!rule) throw Error(ErrorCode::kInvalidArgument, "unknown corner rule '" + text + "'");
          request.corner_rule = *rule;
        }
        if (body.contains("narrate")) {
          const auto text = body["narrate"].get<std::string>();
          const auto mode = parse_narration_mode(text);
          if (!mode) throw Error(ErrorCode::kInvalidArgument, "unknown narration mode '" + text + "'");
          request.narration = *mode;
        }
        RouteResponse response;
        if (request.narration == NarrationMode::kLanguageModel) {
          lm_slots.acquire();
          try {
            response = plan_route(*snap.map, request, options.narration);
          } catch (...) {
            lm_slots.release();
            throw;
          }
          lm_slots.release();
        } else {
          response = plan_route(*snap.map, request, options.narration);
        }
        ordered_json out;
        out["protocol"] = kProtocol;
        out["id"] = id;
        out["revision"] = snap.revision;
        out["route"] = detail::route_json(response, true);
        send_json(res, 200, out);
      });
    });
  }
};

Server::Server(MapStore& store, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
  impl_->install_routes();
}

Server::~Server() { stop(); }

int Server::bind() {
  if (impl_->bound_port >= 0) return impl_->bound_port;
  int port = impl_->options.port;
  if (port == 0) {
    port = impl_->http.bind_to_any_port(impl_->options.host);
    if (port <= 0) throw Error(ErrorCode::kIoFailure, "cannot bind " + impl_->options.host);
  } else if (!impl_->http.bind_to_port(impl_->options.host, port)) {
    throw Error(ErrorCode::kIoFailure,
                "cannot bind " + impl_->options.host + ":" + std::to_string(port));
  }
  impl_->bound_port = port;
  return port;
}

void Server::run() {
  bind();
  impl_->http.listen_after_bind();
}

void Server::stop() {
  if (impl_) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

int Server::port() const { return impl_->bound_port; }

}  // namespace wayfind
