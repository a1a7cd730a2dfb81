/*
 * wayfind C API.
 *
 * All functions return a wf_status. On failure, wf_last_error() returns a
 * thread-local message describing the most recent error on the calling
 * thread. Strings handed out through char** parameters are heap-allocated
 * and must be released with wf_string_free().
 *
 * Handles are opaque. A wf_map may be read from several threads at once;
 * mutating calls (wf_map_set_cell, wf_map_add_*) need exclusive access.
 */
#ifndef WAYFIND_H_
#define WAYFIND_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WAYFIND_API __declspec(dllexport)
#elif defined(WAYFIND_BUILDING_LIBRARY)
#define WAYFIND_API __attribute__((visibility("default")))
#else
#define WAYFIND_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wf_status {
  WF_OK = 0,
  WF_ERR_INVALID_ARGUMENT = 1,
  WF_ERR_EMPTY_MASK = 2,
  WF_ERR_GRID_LARGER_THAN_MASK = 3,
  WF_ERR_IO = 4,
  WF_ERR_PARSE = 5,
  WF_ERR_SCHEMA_VERSION = 6,
  WF_ERR_VALIDATION = 7,
  WF_ERR_OUT_OF_BOUNDS = 8,
  WF_ERR_UNKNOWN_FLOOR = 9,
  WF_ERR_WOULD_ORPHAN = 10,
  WF_ERR_DUPLICATE_POI = 11,
  WF_ERR_NODE_BLOCKED = 12,
  WF_ERR_START_BLOCKED = 13,
  WF_ERR_GOAL_BLOCKED = 14,
  WF_ERR_NO_PATH = 15,
  WF_ERR_NON_ADJACENT_PAIR = 16,
  WF_ERR_INVALID_REPLAY = 17,
  WF_ERR_COLLISION = 18,
  WF_ERR_NO_PORTAL_HERE = 19,
  WF_ERR_EMPTY_SCRIPT = 20,
  WF_ERR_TIMEOUT = 21,
  WF_ERR_ENDPOINT_UNAVAILABLE = 22,
  WF_ERR_MALFORMED_RESPONSE = 23,
  WF_ERR_UNKNOWN_POI = 24,
  WF_ERR_UNKNOWN_MAP = 25,
  WF_ERR_SAME_ENDPOINTS = 26,
  WF_ERR_INTERNAL = 27
} wf_status;

typedef enum wf_corner_rule {
  WF_CORNER_PERMISSIVE = 0,
  WF_CORNER_STRICT = 1
} wf_corner_rule;

typedef enum wf_narration {
  WF_NARRATE_TEMPLATE = 0,
  WF_NARRATE_LM = 1
} wf_narration;

typedef enum wf_format {
  WF_FORMAT_TEXT = 0,
  WF_FORMAT_JSON = 1
} wf_format;

typedef struct wf_map wf_map;
typedef struct wf_route wf_route;
typedef struct wf_server wf_server;

/* Completion endpoint settings for WF_NARRATE_LM. Zero/NULL fields take
 * defaults: max_new_tokens scales with the route, temperature 0, top_p 1,
 * top_k disabled, timeout 30000 ms. */
typedef struct wf_lm_config {
  const char* endpoint;
  int max_new_tokens;
  double temperature;
  double top_p;
  int top_k;
  int timeout_ms;
} wf_lm_config;

typedef struct wf_route_options {
  wf_corner_rule corner_rule;
  wf_narration narration;
  const wf_lm_config* lm; /* may be NULL */
} wf_route_options;

typedef struct wf_bench_options {
  int trials;  /* pairs per map, >= 1 */
  int repeats; /* runs per pair, >= 1 */
  uint64_t seed;
  wf_corner_rule corner_rule;
} wf_bench_options;

WAYFIND_API const char* wf_version(void);
WAYFIND_API const char* wf_status_name(wf_status status);
WAYFIND_API const char* wf_last_error(void);
WAYFIND_API void wf_string_free(char* s);

/* ---- maps ------------------------------------------------------------- */

WAYFIND_API wf_status wf_image_size(const char* image_path, int* width, int* height);
WAYFIND_API wf_status wf_suggest_dimensions(int image_width, int image_height, int max_dimension,
                                            int* rows, int* cols);

/* Single-floor map from a grayscale mask. blocked_threshold <= 0 selects 0.5;
 * luminance_cutoff < 0 selects 128. */
WAYFIND_API wf_status wf_map_from_image(const char* image_path, int rows, int cols,
                                        double blocked_threshold, int luminance_cutoff,
                                        const char* name, wf_map** out);
WAYFIND_API wf_status wf_map_load(const char* path, wf_map** out);
WAYFIND_API wf_status wf_map_save(const wf_map* map, const char* path);
WAYFIND_API wf_status wf_map_serialize(const wf_map* map, char** out);
WAYFIND_API void wf_map_free(wf_map* map);

/* One line per violation in *report; *violation_count is 0 for a valid map. */
WAYFIND_API wf_status wf_map_validate(const wf_map* map, size_t* violation_count, char** report);
/* Same report for a bundle file that may not satisfy the invariants. */
WAYFIND_API wf_status wf_bundle_check(const char* path, size_t* violation_count, char** report);

WAYFIND_API wf_status wf_map_set_cell(wf_map* map, int32_t floor, int i, int j, int free_cell);
WAYFIND_API wf_status wf_map_add_poi(wf_map* map, const char* name, int32_t floor, int i, int j);
WAYFIND_API wf_status wf_map_add_portal(wf_map* map, const char* kind, int32_t floor_a, int i_a,
                                        int j_a, int32_t floor_b, int i_b, int j_b, double cost);

/* ---- routing ---------------------------------------------------------- */

/* origin/destination: a POI name, "floor:i:j", or "i:j" on the first floor. */
WAYFIND_API wf_status wf_route_plan(const wf_map* map, const char* origin,
                                    const char* destination, const wf_route_options* options,
                                    wf_route** out);
WAYFIND_API double wf_route_cost(const wf_route* route);
WAYFIND_API size_t wf_route_node_count(const wf_route* route);
WAYFIND_API wf_status wf_route_render(const wf_route* route, wf_format format,
                                      int include_timings, char** out);
WAYFIND_API void wf_route_free(wf_route* route);

/* ---- bench ------------------------------------------------------------ */

WAYFIND_API wf_status wf_bench_run(const wf_map* const* maps, size_t count,
                                   const wf_bench_options* options, wf_format format,
                                   char** out);

/* ---- service ---------------------------------------------------------- */

/* port 0 binds an ephemeral port; read it back with wf_server_bind. */
WAYFIND_API wf_status wf_server_create(const char* bundle_dir, const char* host, int port,
                                       const wf_lm_config* lm, int max_inflight_lm,
                                       wf_server** out);
WAYFIND_API wf_status wf_server_bind(wf_server* server, int* port);
/* Blocks until wf_server_stop is called from another thread. */
WAYFIND_API wf_status wf_server_run(wf_server* server);
WAYFIND_API void wf_server_stop(wf_server* server);
WAYFIND_API void wf_server_free(wf_server* server);

#ifdef __cplusplus
}
#endif

#endif /* WAYFIND_H_ */
