#include "wayfind/route.hpp"

#include <cstdio>
#include <regex>

#include "json_codec.hpp"
#include "wayfind/error.hpp"

namespace wayfind {

namespace detail {

ordered_json node_json(const NodeRef& n) {
  ordered_json j;
  j["floor"] = n.floor;
  j["i"] = n.cell.i;
  j["j"] = n.cell.j;
  return j;
}

NodeRef node_from(const nlohmann::json& j) {
  return NodeRef{j.at("floor").get<FloorId>(), {j.at("i").get<int>(), j.at("j").get<int>()}};
}

double to_ms(std::chrono::nanoseconds d) { return static_cast<double>(d.count()) / 1e6; }

ordered_json route_json(const RouteResponse& r, bool include_timings) {
  ordered_json j;
  j["origin"] = node_json(r.origin);
  j["destination"] = node_json(r.destination);
  j["corner_rule"] = std::string(to_string(r.corner_rule));
  j["cost"] = r.path.total_cost;
  ordered_json nodes = ordered_json::array();
  for (const NodeRef& n : r.path.nodes) nodes.push_back(node_json(n));
  j["path"] = std::move(nodes);
  j["terse"] = render_terse(r.terse);
  ordered_json guide;
  guide["source"] = std::string(to_string(r.guide.source));
  guide["lines"] = r.guide.numbered_lines();
  guide["fallback_reasons"] = r.guide.fallback_reasons;
  j["guide"] = std::move(guide);
  if (include_timings) {
    ordered_json t;
    t["search_ms"] = to_ms(r.timings.search);
    t["compress_ms"] = to_ms(r.timings.compress);
    t["narrate_ms"] = to_ms(r.timings.narrate);
    t["expanded_nodes"] = r.path.stats.expanded_nodes;
    t["pushed_nodes"] = r.path.stats.pushed_nodes;
    j["timings"] = std::move(t);
  }
  return j;
}

}  // namespace detail

Endpoint parse_endpoint(std::string_view text, const BuildingMap& map) {
  if (const Poi* poi = map.find_poi(text)) return poi->name;
  static const std::regex three(R"(^\s*(-?\d+)\s*:\s*(-?\d+)\s*:\s*(-?\d+)\s*$)");
  static const std::regex two(R"(^\s*(-?\d+)\s*:\s*(-?\d+)\s*$)");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, three)) {
    return NodeRef{std::stoi(m[1].str()), {std::stoi(m[2].str()), std::stoi(m[3].str())}};
  }
  if (std::regex_match(s, m, two)) {
    const FloorId floor = map.floors.empty() ? 0 : map.floors.front().id;
    return NodeRef{floor, {std::stoi(m[1].str()), std::stoi(m[2].str())}};
  }
  return s;
}

NodeRef resolve_endpoint(const Endpoint& endpoint, const BuildingMap& map) {
  if (const auto* name = std::get_if<std::string>(&endpoint)) {
    const Poi* poi = map.find_poi(*name);
    if (poi == nullptr) throw Error(ErrorCode::kUnknownPoi, "no poi named '" + *name + "'");
    return poi->location;
  }
  const NodeRef node = std::get<NodeRef>(endpoint);
  const Floor* floor = map.find_floor(node.floor);
  if (floor == nullptr) throw Error(ErrorCode::kUnknownFloor, "unknown floor " + std::to_string(node.floor));
  if (!floor->grid.in_bounds(node.cell)) {
    throw Error(ErrorCode::kOutOfBounds, to_string(node) + " is outside the grid");
  }
  return node;
}

RouteResponse plan_route(const BuildingMap& map, const RouteRequest& request,
                         const NarrateOptions& narration) {
  RouteResponse out;
  out.origin = resolve_endpoint(request.origin, map);
  out.destination = resolve_endpoint(request.destination, map);
  out.corner_rule = request.corner_rule;
  if (out.origin == out.destination) {
    throw Error(ErrorCode::kSameEndpoints, "origin and destination are the same cell");
  }

  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  out.path = astar(map, out.origin, out.destination, request.corner_rule);
  auto t1 = clock::now();
  out.terse = compress(out.path, map, request.corner_rule);
  auto t2 = clock::now();
  NarrateOptions options = narration;
  options.mode = request.narration;
  out.guide = narrate(out.terse, options);
  auto t3 = clock::now();
  out.timings = {t1 - t0, t2 - t1, t3 - t2};
  return out;
}

std::string render_route_text(const RouteResponse& r, bool include_timings) {
  char cost[64];
  std::snprintf(cost, sizeof(cost), "%.6f", r.path.total_cost);
  std::string out;
  out += "origin: " + to_string(r.origin) + "\n";
  out += "destination: " + to_string(r.destination) + "\n";
  out += "corner rule: " + std::string(to_string(r.corner_rule)) + "\n";
  out += "cost: " + std::string(cost) + "\n";
  out += "nodes: " + std::to_string(r.path.nodes.size()) + "\n";
  out += "\nterse:\n";
  for (const std::string& line : render_terse(r.terse)) out += line + "\n";
  out += "\nguide (" + std::string(to_string(r.guide.source)) + "):\n";
  for (const std::string& line : r.guide.numbered_lines()) out += line + "\n";
  for (const std::string& reason : r.guide.fallback_reasons) out += "fallback: " + reason + "\n";
  if (include_timings) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "\ntimings: search=%.3f ms compress=%.3f ms narrate=%.3f ms expanded=%llu\n",
                  detail::to_ms(r.timings.search), detail::to_ms(r.timings.compress),
                  detail::to_ms(r.timings.narrate),
                  static_cast<unsigned long long>(r.path.stats.expanded_nodes));
    out += buf;
  }
  return out;
}

std::string render_route_json(const RouteResponse& response, bool include_timings) {
  return detail::route_json(response, include_timings).dump(2) + "\n";
}

}  // namespace wayfind
