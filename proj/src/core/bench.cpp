#include "wayfind/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "json_codec.hpp"
#include "wayfind/error.hpp"

namespace wayfind {

BenchSummary summarize(const std::vector<BenchSample>& samples) {
  BenchSummary s;
  s.trials = static_cast<int>(samples.size());
  if (samples.empty()) return s;
  std::vector<double> search;
  double e2e = 0.0;
  for (const BenchSample& b : samples) {
    search.push_back(b.search_ms);
    e2e += b.end_to_end_ms;
    s.deterministic = s.deterministic && b.identical;
  }
  const double n = static_cast<double>(samples.size());
  s.mean_search_ms = std::accumulate(search.begin(), search.end(), 0.0) / n;
  s.mean_end_to_end_ms = e2e / n;
  std::sort(search.begin(), search.end());
  const std::size_t mid = search.size() / 2;
  s.median_search_ms = search.size() % 2 == 1 ? search[mid] : (search[mid - 1] + search[mid]) / 2.0;
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
  s.p95_search_ms = search[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

BenchReport run_bench(const std::vector<BuildingMap>& maps, const BenchOptions& options) {
  if (maps.empty()) throw Error(ErrorCode::kInvalidArgument, "bench needs at least one map");
  if (options.trials < 1 || options.repeats < 1) {
    throw Error(ErrorCode::kInvalidArgument, "trials and repeats must be >= 1");
  }
  BenchReport report;
  report.options = options;
  std::mt19937_64 rng(options.seed);

  for (const BuildingMap& map : maps) {
    MapBenchReport mr;
    mr.map_name = map.name;

    std::vector<NodeRef> free_cells;
    for (const Floor& f : map.floors) {
      for (int i = 0; i < f.grid.rows(); ++i) {
        for (int j = 0; j < f.grid.cols(); ++j) {
          if (f.grid.is_free({i, j})) free_cells.push_back({f.id, {i, j}});
        }
      }
    }
    if (free_cells.size() < 2) {
      throw Error(ErrorCode::kInvalidArgument, "map '" + map.name + "' has fewer than two free cells");
    }
    std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);

    while (static_cast<int>(mr.samples.size()) < options.trials) {
      const NodeRef origin = free_cells[pick(rng)];
      const NodeRef destination = free_cells[pick(rng)];
      RouteRequest request{origin, destination, options.corner_rule, NarrationMode::kTemplate};

      BenchSample sample{origin, destination};
      RouteResponse first;
      try {
        first = plan_route(map, request);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoPath && e.code() != ErrorCode::kSameEndpoints) throw;
        if (++mr.resampled > options.max_resamples) {
          throw Error(ErrorCode::kNoPath, "map '" + map.name + "': too many unreachable pairs");
        }
        continue;
      }
      auto accumulate = [&](const RouteResponse& r) {
        sample.search_ms += detail::to_ms(r.timings.search);
        sample.end_to_end_ms +=
            detail::to_ms(r.timings.search + r.timings.compress + r.timings.narrate);
      };
      accumulate(first);
      const std::string first_guide = first.guide.render();
      for (int k = 1; k < options.repeats; ++k) {
        const RouteResponse again = plan_route(map, request);
        accumulate(again);
        sample.identical = sample.identical && again.path.nodes == first.path.nodes &&
                           again.terse == first.terse && again.guide.render() == first_guide;
      }
      sample.search_ms /= options.repeats;
      sample.end_to_end_ms /= options.repeats;
      sample.cost = first.path.total_cost;
      sample.path_nodes = first.path.nodes.size();
      sample.expanded_nodes = first.path.stats.expanded_nodes;
      mr.samples.push_back(sample);
    }
    mr.summary = summarize(mr.samples);
    report.maps.push_back(std::move(mr));
  }
  return report;
}

std::string render_bench_tsv(const BenchReport& report) {
  std::string out =
      "map\ttrials\tresampled\tmean_search_ms\tmedian_search_ms\tp95_search_ms\tmean_end_to_end_ms\tdeterministic\n";
  for (const MapBenchReport& m : report.maps) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "\t%d\t%d\t%.4f\t%.4f\t%.4f\t%.4f\t%s\n", m.summary.trials, m.resampled,
                  m.summary.mean_search_ms, m.summary.median_search_ms, m.summary.p95_search_ms,
                  m.summary.mean_end_to_end_ms, m.summary.deterministic ? "100%" : "FAILED");
    out += m.map_name + buf;
  }
  return out;
}

std::string render_bench_json(const BenchReport& report) {
  using detail::ordered_json;
  ordered_json doc;
  doc["format"] = "wayfind-bench";
  doc["version"] = 1;
  doc["options"] = {{"trials", report.options.trials},
                    {"repeats", report.options.repeats},
                    {"seed", report.options.seed},
                    {"corner_rule", std::string(to_string(report.options.corner_rule))}};
  doc["maps"] = ordered_json::array();
  for (const MapBenchReport& m : report.maps) {
    ordered_json jm;
    jm["map"] = m.map_name;
    jm["trials"] = m.summary.trials;
    jm["resampled"] = m.resampled;
    jm["mean_search_ms"] = m.summary.mean_search_ms;
    jm["median_search_ms"] = m.summary.median_search_ms;
    jm["p95_search_ms"] = m.summary.p95_search_ms;
    jm["mean_end_to_end_ms"] = m.summary.mean_end_to_end_ms;
    jm["deterministic"] = m.summary.deterministic;
    jm["samples"] = ordered_json::array();
    for (const BenchSample& s : m.samples) {
      ordered_json js;
      js["origin"] = detail::node_json(s.origin);
      js["destination"] = detail::node_json(s.destination);
      js["cost"] = s.cost;
      js["path_nodes"] = s.path_nodes;
      js["expanded_nodes"] = s.expanded_nodes;
      js["search_ms"] = s.search_ms;
      js["end_to_end_ms"] = s.end_to_end_ms;
      js["identical"] = s.identical;
      jm["samples"].push_back(std::move(js));
    }
    doc["maps"].push_back(std::move(jm));
  }
  return doc.dump(2) + "\n";
}

}  // namespace wayfind
