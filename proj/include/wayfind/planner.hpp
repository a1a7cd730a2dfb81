#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wayfind/gridmap.hpp"

namespace wayfind {

// Diagonal moves may pass between two blocked orthogonal cells under
// kPermissive; kStrict requires both flanking cells to be free.
enum class CornerRule { kPermissive, kStrict };

std::string_view to_string(CornerRule rule);
std::optional<CornerRule> parse_corner_rule(std::string_view text);

enum class Direction { kN, kS, kW, kE, kNW, kNE, kSW, kSE };

std::string_view compass_code(Direction d);  // "N", "SE", ...
std::optional<Direction> parse_compass_code(std::string_view code);

inline constexpr double kSqrt2 = 1.4142135623730950488;

struct MoveOffset {
  int di;
  int dj;
  double cost;
  Direction compass;
};

/// The eight moves in fixed order: N, S, W, E, NW, NE, SW, SE.
inline constexpr std::array<MoveOffset, 8> kMoves{{
    {-1, 0, 1.0, Direction::kN},
    {1, 0, 1.0, Direction::kS},
    {0, -1, 1.0, Direction::kW},
    {0, 1, 1.0, Direction::kE},
    {-1, -1, kSqrt2, Direction::kNW},
    {-1, 1, kSqrt2, Direction::kNE},
    {1, -1, kSqrt2, Direction::kSW},
    {1, 1, kSqrt2, Direction::kSE},
}};

const MoveOffset& move_for(Direction d);
std::optional<Direction> direction_of(int di, int dj);
bool is_diagonal(Direction d);

/// Whether a single 8-way step from `from` along `d` is legal on `grid`.
bool step_allowed(const OccupancyGrid& grid, CellCoord from, Direction d, CornerRule rule);

struct Edge {
  NodeRef to;
  double cost;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Free 8-neighbors (in kMoves order) followed by portal hops from `node`,
/// in portal declaration order. Throws kNodeBlocked for a blocked or
/// out-of-bounds node, kUnknownFloor for an undeclared floor.
std::vector<Edge> neighbors(const BuildingMap& map, const NodeRef& node,
                            CornerRule rule = CornerRule::kPermissive);

/// Cost of the edge u -> v, or nullopt if no such edge exists.
std::optional<double> edge_cost(const BuildingMap& map, const NodeRef& u, const NodeRef& v,
                                CornerRule rule);

double chebyshev(CellCoord a, CellCoord b);

/// Exact 8-connected distance on an obstacle-free plane.
double octile(CellCoord a, CellCoord b);

struct SearchStats {
  std::uint64_t expanded_nodes = 0;
  std::uint64_t pushed_nodes = 0;
  std::chrono::nanoseconds wall_time{0};
};

struct Path {
  std::vector<NodeRef> nodes;
  double total_cost = 0.0;
  SearchStats stats;
};

/// A* over the joint multi-floor graph. The heuristic is Chebyshev distance
/// to the goal, or through portal endpoints when that is shorter; on a single
/// floor it is plain Chebyshev distance. Heap order is (f, g, floor, i, j), so the
/// returned node sequence is a pure function of the inputs.
///
/// Throws kStartBlocked, kGoalBlocked (also for unknown floors or
/// out-of-bounds cells) or kNoPath.
Path astar(const BuildingMap& map, const NodeRef& start, const NodeRef& goal,
           CornerRule rule = CornerRule::kPermissive);

/// Exhaustive Dijkstra over neighbors(); settles every reachable node.
/// Reference oracle for astar, same errors.
Path dijkstra_oracle(const BuildingMap& map, const NodeRef& start, const NodeRef& goal,
                     CornerRule rule = CornerRule::kPermissive);

/// Independent re-walk of a path: endpoints, edge legality, cost sum.
/// Empty result means the path is valid.
std::vector<std::string> path_violations(const BuildingMap& map, const Path& path,
                                         const NodeRef& start, const NodeRef& goal,
                                         CornerRule rule);

}  // namespace wayfind
