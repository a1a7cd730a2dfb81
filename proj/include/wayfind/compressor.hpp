#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "wayfind/gridmap.hpp"
#include "wayfind/planner.hpp"

namespace wayfind {

// Marks a hop between floors inside a direction sequence.
struct PortalMarker {
  PortalKind kind;
  FloorId from_floor;
  FloorId to_floor;

  friend bool operator==(const PortalMarker&, const PortalMarker&) = default;
};

using PathSymbol = std::variant<Direction, PortalMarker>;

struct Run {
  PathSymbol symbol;
  int count = 1;  // always 1 for portal markers

  friend bool operator==(const Run&, const Run&) = default;
};

struct Move {
  Direction dir;
  int count;

  friend bool operator==(const Move&, const Move&) = default;
};

struct PortalTransit {
  PortalKind kind;
  FloorId from_floor;
  FloorId to_floor;

  friend bool operator==(const PortalTransit&, const PortalTransit&) = default;
};

using TerseCommand = std::variant<Move, PortalTransit>;

struct TerseScript {
  std::vector<TerseCommand> commands;
  NodeRef origin;

  friend bool operator==(const TerseScript&, const TerseScript&) = default;
};

// Per-stage work counters; each counts elementary loop iterations.
struct CompressionCounters {
  std::uint64_t vectorize_steps = 0;
  std::uint64_t rle_steps = 0;
  std::uint64_t collapse_steps = 0;
};

/// One symbol per consecutive node pair. Throws kNonAdjacentPair.
std::vector<PathSymbol> vectorize(const Path& path, const BuildingMap& map,
                                  CompressionCounters* counters = nullptr);

/// Maximal runs of equal directions. Portal markers never merge.
std::vector<Run> rle(const std::vector<PathSymbol>& symbols,
                     CompressionCounters* counters = nullptr);
std::vector<PathSymbol> expand(const std::vector<Run>& runs);

/// Merges adjacent perpendicular (X,1)(Y,1) pairs into one diagonal step when
/// that diagonal is a legal move from the current cell, then re-runs RLE.
/// Throws kInvalidReplay if `runs` does not replay from `origin`.
std::vector<Run> diagonal_collapse(const std::vector<Run>& runs, const BuildingMap& map,
                                   const NodeRef& origin, CornerRule rule,
                                   CompressionCounters* counters = nullptr);

/// vectorize -> rle -> diagonal_collapse (which ends with the second rle).
TerseScript compress(const Path& path, const BuildingMap& map, CornerRule rule,
                     CompressionCounters* counters = nullptr);

std::vector<TerseCommand> to_commands(const std::vector<Run>& runs);

/// "Go SE 5 steps", "Go N 1 step", "Take the escalator from Floor 0 to 1".
std::string render_command(const TerseCommand& command);
std::vector<std::string> render_terse(const TerseScript& script);
std::string render_terse_block(const TerseScript& script);  // newline-joined

/// Walks the script from its origin and returns the terminal node. Throws
/// kCollisionDuringReplay or kNoPortalHere.
NodeRef replay(const TerseScript& script, const BuildingMap& map,
               CornerRule rule = CornerRule::kPermissive);

/// Sum of move costs (1 or sqrt 2 per step) and portal traversal costs.
double script_cost(const TerseScript& script, const BuildingMap& map);

/// Real-world length of a move when the map declares meters_per_cell.
std::optional<double> walk_distance_meters(const Move& move, const BuildingMap& map);

}  // namespace wayfind
