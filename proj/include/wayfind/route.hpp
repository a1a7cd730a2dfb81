#pragma once

#include <chrono>
#include <string>
#include <variant>

#include "wayfind/compressor.hpp"
#include "wayfind/gridmap.hpp"
#include "wayfind/narrator.hpp"
#include "wayfind/planner.hpp"

namespace wayfind {

/// A POI name or an explicit cell.
using Endpoint = std::variant<std::string, NodeRef>;

/// Parses "name", "floor:i:j" or "i:j" (first declared floor). A POI whose
/// name matches the text wins over the coordinate reading and is returned
/// with its stored spelling.
Endpoint parse_endpoint(std::string_view text, const BuildingMap& map);

/// Throws kUnknownPoi, kUnknownFloor or kOutOfBounds.
NodeRef resolve_endpoint(const Endpoint& endpoint, const BuildingMap& map);

struct RouteRequest {
  Endpoint origin;
  Endpoint destination;
  CornerRule corner_rule = CornerRule::kPermissive;
  NarrationMode narration = NarrationMode::kTemplate;
};

struct RouteTimings {
  std::chrono::nanoseconds search{0};
  std::chrono::nanoseconds compress{0};
  std::chrono::nanoseconds narrate{0};
};

struct RouteResponse {
  NodeRef origin;
  NodeRef destination;
  CornerRule corner_rule = CornerRule::kPermissive;
  Path path;
  TerseScript terse;
  InstructionScript guide;
  RouteTimings timings;
};

/// astar -> compress -> narrate. `narration` supplies LM settings; its mode
/// is taken from the request. Throws kSameEndpoints, resolution errors and
/// planner errors.
RouteResponse plan_route(const BuildingMap& map, const RouteRequest& request,
                         const NarrateOptions& narration = {});

/// Human-readable report. Everything above the timings line is a pure
/// function of the request and map.
std::string render_route_text(const RouteResponse& response, bool include_timings = true);

/// Structured form, see docs/service-protocol.md.
std::string render_route_json(const RouteResponse& response, bool include_timings = true);

}  // namespace wayfind
