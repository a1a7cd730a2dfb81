#pragma once

// Map fixtures shared by the unit and acceptance suites.

#include <cstdint>
#include <string>
#include <vector>

#include "wayfind/gridmap.hpp"

namespace wayfind::testing {

BuildingMap single_floor(const std::vector<std::string>& rows, std::string name = "fixture");
BuildingMap all_free(int rows, int cols);

/// Each cell blocked independently with probability `density`.
BuildingMap random_grid(int rows, int cols, double density, std::uint64_t seed);

/// Same, on a floor with the given id and label, no POIs.
Floor random_floor(FloorId id, std::string label, int rows, int cols, double density,
                   std::uint64_t seed);

/// Two 12x16 floors joined by one escalator, with POIs "Main Entrance"
/// (floor 0) and "Food Court" (floor 1).
BuildingMap two_floor_mall();

/// 90x130 terminal-like grid with "Southwest gate" at (53,16).
BuildingMap terminal_90x130();

/// 120x190 grid, ~40% blocked.
BuildingMap airport_120x190(std::uint64_t seed = 7);

/// 80x130 ground floor and 80x100 first floor (~40% blocked each) joined by
/// escalators and an elevator.
BuildingMap mall_two_floor_large(std::uint64_t seed = 11);

/// Largest 8-connected component's cells, for picking solvable pairs.
std::vector<NodeRef> largest_component(const BuildingMap& map);

}  // namespace wayfind::testing
