#pragma once

// nlohmann/json encoders shared by the route renderer, the server and the
// bench report. Internal to the core library.

#include <nlohmann/json.hpp>

#include "wayfind/gridmap.hpp"
#include "wayfind/route.hpp"

namespace wayfind::detail {

using ordered_json = nlohmann::ordered_json;

ordered_json node_json(const NodeRef& n);
NodeRef node_from(const nlohmann::json& j);
ordered_json route_json(const RouteResponse& r, bool include_timings);
double to_ms(std::chrono::nanoseconds d);

}  // namespace wayfind::detail
