// wayfind command-line tool. Talks to the library only through wayfind.h.

#include <signal.h>

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "wayfind/wayfind.h"

namespace {

// Process exit codes.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoPath = 3;
constexpr int kExitUnresolved = 4;
constexpr int kExitInvalidMap = 5;
constexpr int kExitIo = 6;

int exit_code_for(wf_status s) {
  switch (s) {
    case WF_OK:
      return kExitOk;
    case WF_ERR_NO_PATH:
      return kExitNoPath;
    case WF_ERR_UNKNOWN_POI:
    case WF_ERR_UNKNOWN_FLOOR:
    case WF_ERR_OUT_OF_BOUNDS:
    case WF_ERR_SAME_ENDPOINTS:
    case WF_ERR_START_BLOCKED:
    case WF_ERR_GOAL_BLOCKED:
      return kExitUnresolved;
    case WF_ERR_VALIDATION:
      return kExitInvalidMap;
    case WF_ERR_IO:
    case WF_ERR_PARSE:
    case WF_ERR_SCHEMA_VERSION:
      return kExitIo;
    case WF_ERR_INVALID_ARGUMENT:
    case WF_ERR_GRID_LARGER_THAN_MASK:
    case WF_ERR_EMPTY_MASK:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

int report(wf_status s) {
  if (s != WF_OK) std::fprintf(stderr, "error: %s: %s\n", wf_status_name(s), wf_last_error());
  return exit_code_for(s);
}

struct MapHandle {
  wf_map* map = nullptr;
  ~MapHandle() { wf_map_free(map); }
};

struct Text {
  char* s = nullptr;
  ~Text() { wf_string_free(s); }
};

wf_corner_rule corner_rule_of(const std::string& s) {
  return s == "strict" ? WF_CORNER_STRICT : WF_CORNER_PERMISSIVE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wayfind: occupancy-grid indoor routing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wf_version()));

  const std::vector<std::string> corner_rules{"permissive", "strict"};

  // build-grid
  std::string image, out_bundle, map_name;
  int rows = 0, cols = 0, max_dim = 0, cutoff = -1;
  double threshold = 0.5;
  auto* build = app.add_subcommand("build-grid", "Binarize a grayscale mask into a single-floor bundle");
  build->add_option("image", image, "PNG or PGM mask")->required()->check(CLI::ExistingFile);
  build->add_option("--rows", rows, "Grid rows")->check(CLI::PositiveNumber);
  build->add_option("--cols", cols, "Grid columns")->check(CLI::PositiveNumber);
  build->add_option("--max-dim", max_dim, "Derive rows/cols from the image aspect ratio")
      ->check(CLI::PositiveNumber);
  build->add_option("--threshold", threshold, "Blocked fraction above which a cell is blocked")
      ->check(CLI::Range(0.0, 1.0));
  build->add_option("--cutoff", cutoff, "Pixels darker than this are blocked (default 128)")
      ->check(CLI::Range(0, 256));
  build->add_option("--name", map_name, "Map name");
  build->add_option("-o,--out", out_bundle, "Output bundle path")->required();

  // route
  std::string bundle, origin, destination, corner = "permissive", narrate = "template", format = "text";
  std::string lm_endpoint;
  int lm_timeout_ms = 30000;
  bool no_timings = false;
  auto* route = app.add_subcommand("route", "Plan a route and print cost, terse commands and guide");
  route->add_option("bundle", bundle, "Bundle file")->required()->check(CLI::ExistingFile);
  route->add_option("origin", origin, "POI name, floor:i:j or i:j")->required();
  route->add_option("destination", destination, "POI name, floor:i:j or i:j")->required();
  route->add_option("--corner-rule", corner)->check(CLI::IsMember(corner_rules));
  route->add_option("--narrate", narrate)->check(CLI::IsMember({"template", "lm"}));
  route->add_option("--lm-endpoint", lm_endpoint, "Completion endpoint URL for --narrate lm");
  route->add_option("--lm-timeout-ms", lm_timeout_ms)->check(CLI::PositiveNumber);
  route->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  route->add_flag("--no-timings", no_timings, "Omit timing information");

  // serve
  std::string serve_dir, host = "127.0.0.1";
  int port = 8080, max_inflight = 2;
  auto* serve = app.add_subcommand("serve", "Serve bundles of a directory over HTTP/JSON");
  serve->add_option("dir", serve_dir, "Directory of *.json bundles")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--host", host);
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--lm-endpoint", lm_endpoint);
  serve->add_option("--max-inflight-lm", max_inflight)->check(CLI::PositiveNumber);

  // bench
  std::vector<std::string> bench_bundles;
  int trials = 20, repeats = 2;
  std::uint64_t seed = 1;
  std::string bench_format = "tsv";
  auto* bench = app.add_subcommand("bench", "Time seeded random queries and check determinism");
  bench->add_option("bundles", bench_bundles, "Bundle files")->required()->check(CLI::ExistingFile);
  bench->add_option("--trials", trials)->check(CLI::PositiveNumber);
  bench->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed);
  bench->add_option("--corner-rule", corner)->check(CLI::IsMember(corner_rules));
  bench->add_option("--format", bench_format)->check(CLI::IsMember({"tsv", "json"}));

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a bundle against the map invariants");
  validate->add_option("bundle", validate_path)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*build) {
    if (max_dim > 0 && (rows > 0 || cols > 0)) {
      std::fprintf(stderr, "error: --max-dim excludes --rows/--cols\n");
      return kExitUsage;
    }
    if (max_dim > 0) {
      int w = 0, h = 0;
      if (auto s = wf_image_size(image.c_str(), &w, &h); s != WF_OK) return report(s);
      if (auto s = wf_suggest_dimensions(w, h, max_dim, &rows, &cols); s != WF_OK) return report(s);
    }
    if (rows <= 0 || cols <= 0) {
      std::fprintf(stderr, "error: give --rows and --cols, or --max-dim\n");
      return kExitUsage;
    }
    MapHandle m;
    if (auto s = wf_map_from_image(image.c_str(), rows, cols, threshold, cutoff,
                                   map_name.c_str(), &m.map); s != WF_OK) {
      return report(s);
    }
    if (auto s = wf_map_save(m.map, out_bundle.c_str()); s != WF_OK) return report(s);
    std::printf("wrote %s (%dx%d)\n", out_bundle.c_str(), rows, cols);
    return kExitOk;
  }

  if (*route) {
    MapHandle m;
    if (auto s = wf_map_load(bundle.c_str(), &m.map); s != WF_OK) return report(s);
    wf_lm_config lm{};
    lm.endpoint = lm_endpoint.empty() ? nullptr : lm_endpoint.c_str();
    lm.timeout_ms = lm_timeout_ms;
    wf_route_options options{corner_rule_of(corner),
                             narrate == "lm" ? WF_NARRATE_LM : WF_NARRATE_TEMPLATE, &lm};
    wf_route* r = nullptr;
    if (auto s = wf_route_plan(m.map, origin.c_str(), destination.c_str(), &options, &r); s != WF_OK) {
      return report(s);
    }
    Text text;
    const wf_status s = wf_route_render(r, format == "json" ? WF_FORMAT_JSON : WF_FORMAT_TEXT,
                                        no_timings ? 0 : 1, &text.s);
    wf_route_free(r);
    if (s != WF_OK) return report(s);
    std::fputs(text.s, stdout);
    return kExitOk;
  }

  if (*serve) {
    // Signals are consumed by sigwait below rather than interrupting threads.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    wf_lm_config lm{};
    lm.endpoint = lm_endpoint.empty() ? nullptr : lm_endpoint.c_str();
    wf_server* server = nullptr;
    if (auto s = wf_server_create(serve_dir.c_str(), host.c_str(), port, &lm, max_inflight, &server);
        s != WF_OK) {
      return report(s);
    }
    int bound = 0;
    if (auto s = wf_server_bind(server, &bound); s != WF_OK) {
      wf_server_free(server);
      return report(s);
    }
    std::printf("listening on http://%s:%d\n", host.c_str(), bound);
    std::fflush(stdout);
    wf_status run_status = WF_OK;
    std::thread worker([&] { run_status = wf_server_run(server); });
    std::thread waiter([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      wf_server_stop(server);
    });
    worker.join();
    // The waiter is still parked in sigwait if the server stopped on its own.
    waiter.detach();
    wf_server_free(server);
    return report(run_status);
  }

  if (*bench) {
    std::vector<MapHandle> handles(bench_bundles.size());
    std::vector<const wf_map*> maps;
    for (std::size_t k = 0; k < bench_bundles.size(); ++k) {
      if (auto s = wf_map_load(bench_bundles[k].c_str(), &handles[k].map); s != WF_OK) return report(s);
      maps.push_back(handles[k].map);
    }
    wf_bench_options options{trials, repeats, seed, corner_rule_of(corner)};
    Text text;
    if (auto s = wf_bench_run(maps.data(), maps.size(), &options,
                              bench_format == "json" ? WF_FORMAT_JSON : WF_FORMAT_TEXT, &text.s);
        s != WF_OK) {
      return report(s);
    }
    std::fputs(text.s, stdout);
    return kExitOk;
  }

  if (*validate) {
    std::size_t count = 0;
    Text text;
    if (auto s = wf_bundle_check(validate_path.c_str(), &count, &text.s); s != WF_OK) return report(s);
    if (count == 0) {
      std::printf("%s: ok\n", validate_path.c_str());
      return kExitOk;
    }
    std::fputs(text.s, stdout);
    return kExitInvalidMap;
  }
  return kExitUsage;
}
