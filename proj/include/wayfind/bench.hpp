#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wayfind/gridmap.hpp"
#include "wayfind/planner.hpp"
#include "wayfind/route.hpp"

namespace wayfind {

struct BenchOptions {
  int trials = 20;          // origin/destination pairs per map
  int repeats = 2;          // runs per pair for the determinism check
  std::uint64_t seed = 1;
  CornerRule corner_rule = CornerRule::kPermissive;
  int max_resamples = 10000;  // per map; unreachable or degenerate pairs
};

struct BenchSample {
  NodeRef origin;
  NodeRef destination;
  double cost = 0.0;
  std::size_t path_nodes = 0;
  std::uint64_t expanded_nodes = 0;
  double search_ms = 0.0;      // mean over repeats
  double end_to_end_ms = 0.0;  // search + compress + template narration, mean over repeats
  bool identical = true;       // every repeat matched the first run
};

struct BenchSummary {
  int trials = 0;
  double mean_search_ms = 0.0;
  double median_search_ms = 0.0;
  double p95_search_ms = 0.0;  // nearest rank
  double mean_end_to_end_ms = 0.0;
  bool deterministic = true;
};

BenchSummary summarize(const std::vector<BenchSample>& samples);

struct MapBenchReport {
  std::string map_name;
  int resampled = 0;
  std::vector<BenchSample> samples;
  BenchSummary summary;
};

struct BenchReport {
  BenchOptions options;
  std::vector<MapBenchReport> maps;
};

/// Seeded random origin/destination pairs over free cells (all floors).
/// Pairs with no path are redrawn and counted in `resampled`.
BenchReport run_bench(const std::vector<BuildingMap>& maps, const BenchOptions& options);

/// Tab-separated summary, one row per map, header first.
std::string render_bench_tsv(const BenchReport& report);
/// Full report including raw samples.
std::string render_bench_json(const BenchReport& report);

}  // namespace wayfind
