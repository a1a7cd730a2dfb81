// extern "C" surface over the core library.

#include "wayfind/wayfind.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "wayfind/bench.hpp"
#include "wayfind/error.hpp"
#include "wayfind/gridmap.hpp"
#include "wayfind/route.hpp"
#include "wayfind/service.hpp"

struct wf_map {
  wayfind::BuildingMap map;
};

struct wf_route {
  wayfind::RouteResponse response;
};

struct wf_server {
  std::unique_ptr<wayfind::MapStore> store;
  std::unique_ptr<wayfind::Server> server;
};

namespace {

using wayfind::Error;
using wayfind::ErrorCode;

static_assert(static_cast<int>(ErrorCode::kInvalidArgument) + 1 == WF_ERR_INVALID_ARGUMENT);
static_assert(static_cast<int>(ErrorCode::kNoPath) + 1 == WF_ERR_NO_PATH);
static_assert(static_cast<int>(ErrorCode::kUnknownPoi) + 1 == WF_ERR_UNKNOWN_POI);
static_assert(static_cast<int>(ErrorCode::kInternal) + 1 == WF_ERR_INTERNAL);

thread_local std::string last_error;

wf_status fail(ErrorCode code, const std::string& message) {
  last_error = message;
  return static_cast<wf_status>(static_cast<int>(code) + 1);
}

template <class Fn>
wf_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return WF_OK;
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ErrorCode::kInternal, "out of memory");
  } catch (const std::exception& e) {
    return fail(ErrorCode::kInternal, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

wayfind::CornerRule corner_rule(wf_corner_rule r) {
  return r == WF_CORNER_STRICT ? wayfind::CornerRule::kStrict : wayfind::CornerRule::kPermissive;
}

wayfind::LmConfig lm_config(const wf_lm_config* c) {
  wayfind::LmConfig out;
  if (c == nullptr) return out;
  if (c->endpoint != nullptr) out.endpoint = c->endpoint;
  if (c->max_new_tokens > 0) out.max_new_tokens = c->max_new_tokens;
  if (c->temperature > 0.0) out.temperature = c->temperature;
  if (c->top_p > 0.0) out.top_p = c->top_p;
  if (c->top_k > 0) out.top_k = c->top_k;
  if (c->timeout_ms > 0) out.timeout = std::chrono::milliseconds(c->timeout_ms);
  return out;
}

}  // namespace

extern "C" {

WAYFIND_API const char* wf_version(void) { return "0.1.0"; }

WAYFIND_API const char* wf_status_name(wf_status status) {
  if (status == WF_OK) return "Ok";
  if (status < WF_ERR_INVALID_ARGUMENT || status > WF_ERR_INTERNAL) return "Unknown";
  return wayfind::error_code_name(static_cast<ErrorCode>(static_cast<int>(status) - 1)).data();
}

WAYFIND_API const char* wf_last_error(void) { return last_error.c_str(); }

WAYFIND_API void wf_string_free(char* s) { std::free(s); }

WAYFIND_API wf_status wf_image_size(const char* image_path, int* width, int* height) {
  return guarded([&] {
    require(image_path && width && height, "null argument");
    const auto image = wayfind::load_gray_image(image_path);
    *width = image.width;
    *height = image.height;
  });
}

WAYFIND_API wf_status wf_suggest_dimensions(int image_width, int image_height, int max_dimension,
                                            int* rows, int* cols) {
  return guarded([&] {
    require(rows && cols, "null argument");
    std::tie(*rows, *cols) = wayfind::suggest_dimensions(image_width, image_height, max_dimension);
  });
}

WAYFIND_API wf_status wf_map_from_image(const char* image_path, int rows, int cols,
                                        double blocked_threshold, int luminance_cutoff,
                                        const char* name, wf_map** out) {
  return guarded([&] {
    require(image_path && out, "null argument");
    wayfind::BinarizeOptions options;
    if (blocked_threshold > 0.0) options.blocked_threshold = blocked_threshold;
    if (luminance_cutoff >= 0) options.luminance_cutoff = luminance_cutoff;
    const auto image = wayfind::load_gray_image(image_path);
    auto handle = std::make_unique<wf_map>();
    handle->map.name = name != nullptr ? name : "";
    wayfind::Floor floor;
    floor.id = 0;
    floor.label = "Ground Floor";
    floor.grid = wayfind::binarize_mask(image, rows, cols, options);
    floor.source_image = std::string(image_path);
    handle->map.floors.push_back(std::move(floor));
    *out = handle.release();
  });
}

WAYFIND_API wf_status wf_map_load(const char* path, wf_map** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto handle = std::make_unique<wf_map>();
    handle->map = wayfind::load_bundle(path);
    *out = handle.release();
  });
}

WAYFIND_API wf_status wf_map_save(const wf_map* map, const char* path) {
  return guarded([&] {
    require(map && path, "null argument");
    wayfind::save_bundle(map->map, path);
  });
}

WAYFIND_API wf_status wf_map_serialize(const wf_map* map, char** out) {
  return guarded([&] {
    require(map && out, "null argument");
    *out = dup_string(wayfind::serialize_bundle(map->map));
  });
}

WAYFIND_API void wf_map_free(wf_map* map) { delete map; }

namespace {

void write_violations(const wayfind::BuildingMap& map, size_t* violation_count, char** report) {
  const auto violations = wayfind::validate_building(map);
  std::string text;
  for (const auto& v : violations) {
    text += std::string(wayfind::to_string(v.kind)) + "\t" + v.subject + "\t" + v.message + "\n";
  }
  *violation_count = violations.size();
  if (report != nullptr) *report = dup_string(text);
}

}  // namespace

WAYFIND_API wf_status wf_map_validate(const wf_map* map, size_t* violation_count, char** report) {
  return guarded([&] {
    require(map && violation_count, "null argument");
    write_violations(map->map, violation_count, report);
  });
}

WAYFIND_API wf_status wf_bundle_check(const char* path, size_t* violation_count, char** report) {
  return guarded([&] {
    require(path && violation_count, "null argument");
    write_violations(wayfind::load_bundle(path, wayfind::BundleCheck::kSkipValidation),
                     violation_count, report);
  });
}

WAYFIND_API wf_status wf_map_set_cell(wf_map* map, int32_t floor, int i, int j, int free_cell) {
  return guarded([&] {
    require(map, "null argument");
    map->map = wayfind::set_cell(map->map, floor, {i, j}, free_cell != 0);
  });
}

WAYFIND_API wf_status wf_map_add_poi(wf_map* map, const char* name, int32_t floor, int i, int j) {
  return guarded([&] {
    require(map && name, "null argument");
    map->map = wayfind::add_poi(map->map, {name, {floor, {i, j}}});
  });
}

WAYFIND_API wf_status wf_map_add_portal(wf_map* map, const char* kind, int32_t floor_a, int i_a,
                                        int j_a, int32_t floor_b, int i_b, int j_b, double cost) {
  return guarded([&] {
    require(map && kind, "null argument");
    const auto k = wayfind::parse_portal_kind(kind);
    require(k.has_value(), "portal kind must be escalator, elevator or staircase");
    map->map = wayfind::add_portal(map->map, {*k, {floor_a, {i_a, j_a}}, {floor_b, {i_b, j_b}}, cost});
  });
}

WAYFIND_API wf_status wf_route_plan(const wf_map* map, const char* origin,
                                    const char* destination, const wf_route_options* options,
                                    wf_route** out) {
  return guarded([&] {
    require(map && origin && destination && out, "null argument");
    wayfind::RouteRequest request{wayfind::parse_endpoint(origin, map->map),
                                  wayfind::parse_endpoint(destination, map->map)};
    wayfind::NarrateOptions narration;
    if (options != nullptr) {
      request.corner_rule = corner_rule(options->corner_rule);
      request.narration = options->narration == WF_NARRATE_LM ? wayfind::NarrationMode::kLanguageModel
                                                              : wayfind::NarrationMode::kTemplate;
      narration.lm = lm_config(options->lm);
    }
    auto handle = std::make_unique<wf_route>();
    handle->response = wayfind::plan_route(map->map, request, narration);
    *out = handle.release();
  });
}

WAYFIND_API double wf_route_cost(const wf_route* route) {
  return route != nullptr ? route->response.path.total_cost : -1.0;
}

WAYFIND_API size_t wf_route_node_count(const wf_route* route) {
  return route != nullptr ? route->response.path.nodes.size() : 0;
}

WAYFIND_API wf_status wf_route_render(const wf_route* route, wf_format format, int include_timings,
                                      char** out) {
  return guarded([&] {
    require(route && out, "null argument");
    *out = dup_string(format == WF_FORMAT_JSON
                          ? wayfind::render_route_json(route->response, include_timings != 0)
                          : wayfind::render_route_text(route->response, include_timings != 0));
  });
}

WAYFIND_API void wf_route_free(wf_route* route) { delete route; }

WAYFIND_API wf_status wf_bench_run(const wf_map* const* maps, size_t count,
                                   const wf_bench_options* options, wf_format format, char** out) {
  return guarded([&] {
    require(maps && out && count > 0, "bench needs at least one map");
    std::vector<wayfind::BuildingMap> list;
    for (size_t k = 0; k < count; ++k) {
      require(maps[k] != nullptr, "null map");
      list.push_back(maps[k]->map);
    }
    wayfind::BenchOptions bo;
    if (options != nullptr) {
      bo.trials = options->trials;
      bo.repeats = options->repeats;
      bo.seed = options->seed;
      bo.corner_rule = corner_rule(options->corner_rule);
    }
    const auto report = wayfind::run_bench(list, bo);
    *out = dup_string(format == WF_FORMAT_JSON ? wayfind::render_bench_json(report)
                                               : wayfind::render_bench_tsv(report));
  });
}

WAYFIND_API wf_status wf_server_create(const char* bundle_dir, const char* host, int port,
                                       const wf_lm_config* lm, int max_inflight_lm,
                                       wf_server** out) {
  return guarded([&] {
    require(bundle_dir && out, "null argument");
    auto handle = std::make_unique<wf_server>();
    handle->store = std::make_unique<wayfind::MapStore>(bundle_dir);
    wayfind::ServerOptions options;
    if (host != nullptr) options.host = host;
    options.port = port;
    options.narration.lm = lm_config(lm);
    if (max_inflight_lm > 0) options.max_inflight_lm = max_inflight_lm;
    handle->server = std::make_unique<wayfind::Server>(*handle->store, options);
    *out = handle.release();
  });
}

WAYFIND_API wf_status wf_server_bind(wf_server* server, int* port) {
  return guarded([&] {
    require(server != nullptr, "null argument");
    const int p = server->server->bind();
    if (port != nullptr) *port = p;
  });
}

WAYFIND_API wf_status wf_server_run(wf_server* server) {
  return guarded([&] {
    require(server != nullptr, "null argument");
    server->server->run();
  });
}

WAYFIND_API void wf_server_stop(wf_server* server) {
  if (server != nullptr) server->server->stop();
}

WAYFIND_API void wf_server_free(wf_server* server) { delete server; }

}  // extern "C"
