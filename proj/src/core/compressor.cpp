#include "wayfind/compressor.hpp"

#include <cmath>

#include "wayfind/error.hpp"

namespace wayfind {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Portal* find_transit(const BuildingMap& map, const NodeRef& at, PortalKind kind,
                           FloorId to_floor, NodeRef* exit) {
  for (const Portal& p : map.portals) {
    if (p.kind != kind) continue;
    if (p.a == at && p.b.floor == to_floor) {
      *exit = p.b;
      return &p;
    }
    if (p.b == at && p.a.floor == to_floor) {
      *exit = p.a;
      return &p;
    }
  }
  return nullptr;
}

// Replays one symbol `count` times from `pos`, reporting failures with `code`.
// Returns the cost walked.
double advance(const BuildingMap& map, NodeRef& pos, const PathSymbol& symbol, int count,
               CornerRule rule, ErrorCode code) {
  return std::visit(
      Overloaded{
          [&](Direction d) {
            const Floor* floor = map.find_floor(pos.floor);
            if (floor == nullptr) {
              throw Error(code, "replay reached unknown floor " + std::to_string(pos.floor));
            }
            const MoveOffset& m = move_for(d);
            for (int s = 0; s < count; ++s) {
              if (!step_allowed(floor->grid, pos.cell, d, rule)) {
                throw Error(code, "step " + std::string(compass_code(d)) + " from " +
                                      to_string(pos) + " enters a blocked cell");
              }
              pos.cell.i += m.di;
              pos.cell.j += m.dj;
            }
            return m.cost * count;
          },
          [&](const PortalMarker& marker) {
            if (pos.floor != marker.from_floor) {
              throw Error(code == ErrorCode::kCollisionDuringReplay ? ErrorCode::kNoPortalHere : code,
                          "transit expects floor " + std::to_string(marker.from_floor) +
                              " but replay is at " + to_string(pos));
            }
            NodeRef exit;
            const Portal* portal = find_transit(map, pos, marker.kind, marker.to_floor, &exit);
            if (portal == nullptr) {
              throw Error(code == ErrorCode::kCollisionDuringReplay ? ErrorCode::kNoPortalHere : code,
                          "no " + std::string(to_string(marker.kind)) + " to floor " +
                              std::to_string(marker.to_floor) + " at " + to_string(pos));
            }
            if (!map.is_free(exit)) {
              throw Error(code, "portal exit " + to_string(exit) + " is blocked");
            }
            pos = exit;
            return portal->cost;
          },
      },
      symbol);
}

std::optional<Direction> orthogonal_pair(const Run& a, const Run& b) {
  const auto* da = std::get_if<Direction>(&a.symbol);
  const auto* db = std::get_if<Direction>(&b.symbol);
  if (da == nullptr || db == nullptr || a.count != 1 || b.count != 1) return std::nullopt;
  if (is_diagonal(*da) || is_diagonal(*db)) return std::nullopt;
  const MoveOffset& ma = move_for(*da);
  const MoveOffset& mb = move_for(*db);
  // One vertical plus one horizontal step.
  if ((ma.di == 0) == (mb.di == 0)) return std::nullopt;
  return direction_of(ma.di + mb.di, ma.dj + mb.dj);
}

void append_merged(std::vector<Run>& out, const Run& r, CompressionCounters* counters) {
  if (counters) ++counters->collapse_steps;
  if (!out.empty() && std::holds_alternative<Direction>(r.symbol) &&
      out.back().symbol == r.symbol) {
    out.back().count += r.count;
  } else {
    out.push_back(r);
  }
}

}  // namespace

std::vector<PathSymbol> vectorize(const Path& path, const BuildingMap& map,
                                  CompressionCounters* counters) {
  std::vector<PathSymbol> out;
  if (path.nodes.size() < 2) return out;
  out.reserve(path.nodes.size() - 1);
  for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) {
    if (counters) ++counters->vectorize_steps;
    const NodeRef& u = path.nodes[k];
    const NodeRef& v = path.nodes[k + 1];
    if (u.floor == v.floor) {
      if (auto d = direction_of(v.cell.i - u.cell.i, v.cell.j - u.cell.j)) {
        out.emplace_back(*d);
        continue;
      }
    } else {
      const Portal* hop = nullptr;
      for (const Portal& p : map.portals) {
        if ((p.a == u && p.b == v) || (p.b == u && p.a == v)) {
          hop = &p;
          break;
        }
      }
      if (hop != nullptr) {
        out.emplace_back(PortalMarker{hop->kind, u.floor, v.floor});
        continue;
      }
    }
    throw Error(ErrorCode::kNonAdjacentPair,
                "path step " + std::to_string(k) + " " + to_string(u) + " -> " + to_string(v) +
                    " is neither a neighbour move nor a portal");
  }
  return out;
}

std::vector<Run> rle(const std::vector<PathSymbol>& symbols, CompressionCounters* counters) {
  std::vector<Run> out;
  for (const PathSymbol& s : symbols) {
    if (counters) ++counters->rle_steps;
    if (!out.empty() && std::holds_alternative<Direction>(s) && out.back().symbol == s) {
      ++out.back().count;
    } else {
      out.push_back({s, 1});
    }
  }
  return out;
}

std::vector<PathSymbol> expand(const std::vector<Run>& runs) {
  std::vector<PathSymbol> out;
  for (const Run& r : runs) out.insert(out.end(), static_cast<std::size_t>(r.count), r.symbol);
  return out;
}

std::vector<Run> diagonal_collapse(const std::vector<Run>& runs, const BuildingMap& map,
                                   const NodeRef& origin, CornerRule rule,
                                   CompressionCounters* counters) {
  {
    NodeRef pos = origin;
    if (!map.is_free(pos)) {
      throw Error(ErrorCode::kInvalidReplay, "origin " + to_string(origin) + " is not free");
    }
    for (const Run& r : runs) {
      if (counters) ++counters->collapse_steps;
      if (r.count < 1) throw Error(ErrorCode::kInvalidReplay, "run with non-positive count");
      advance(map, pos, r.symbol, r.count, rule, ErrorCode::kInvalidReplay);
    }
  }

  std::vector<Run> merged;
  merged.reserve(runs.size());
  NodeRef pos = origin;
  for (std::size_t k = 0; k < runs.size();) {
    if (counters) ++counters->collapse_steps;
    if (k + 1 < runs.size()) {
      if (auto diag = orthogonal_pair(runs[k], runs[k + 1])) {
        const Floor* floor = map.find_floor(pos.floor);
        if (step_allowed(floor->grid, pos.cell, *diag, rule)) {
          merged.push_back({*diag, 1});
          advance(map, pos, *diag, 1, rule, ErrorCode::kInvalidReplay);
          k += 2;
          continue;
        }
      }
    }
    merged.push_back(runs[k]);
    advance(map, pos, runs[k].symbol, runs[k].count, rule, ErrorCode::kInvalidReplay);
    ++k;
  }

  // Second run-length pass joins the diagonals produced above.
  std::vector<Run> out;
  out.reserve(merged.size());
  for (const Run& r : merged) append_merged(out, r, counters);
  return out;
}

std::vector<TerseCommand> to_commands(const std::vector<Run>& runs) {
  std::vector<TerseCommand> out;
  out.reserve(runs.size());
  for (const Run& r : runs) {
    std::visit(Overloaded{
                   [&](Direction d) { out.emplace_back(Move{d, r.count}); },
                   [&](const PortalMarker& m) {
                     out.emplace_back(PortalTransit{m.kind, m.from_floor, m.to_floor});
                   },
               },
               r.symbol);
  }
  return out;
}

TerseScript compress(const Path& path, const BuildingMap& map, CornerRule rule,
                     CompressionCounters* counters) {
  if (path.nodes.empty()) throw Error(ErrorCode::kInvalidArgument, "path has no nodes");
  const auto symbols = vectorize(path, map, counters);
  const auto runs = rle(symbols, counters);
  const auto collapsed = diagonal_collapse(runs, map, path.nodes.front(), rule, counters);
  return TerseScript{to_commands(collapsed), path.nodes.front()};
}

std::string render_command(const TerseCommand& command) {
  return std::visit(
      Overloaded{
          [](const Move& m) {
            return "Go " + std::string(compass_code(m.dir)) + " " + std::to_string(m.count) +
                   (m.count == 1 ? " step" : " steps");
          },
          [](const PortalTransit& t) {
            return "Take the " + std::string(to_string(t.kind)) + " from Floor " +
                   std::to_string(t.from_floor) + " to " + std::to_string(t.to_floor);
          },
      },
      command);
}

std::vector<std::string> render_terse(const TerseScript& script) {
  std::vector<std::string> lines;
  lines.reserve(script.commands.size());
  for (const TerseCommand& c : script.commands) lines.push_back(render_command(c));
  return lines;
}

std::string render_terse_block(const TerseScript& script) {
  std::string out;
  for (const std::string& line : render_terse(script)) {
    if (!out.empty()) out += '\n';
    out += line;
  }
  return out;
}

namespace {

PathSymbol symbol_of(const TerseCommand& c, int* count) {
  return std::visit(Overloaded{
                        [&](const Move& m) -> PathSymbol {
                          *count = m.count;
                          return m.dir;
                        },
                        [&](const PortalTransit& t) -> PathSymbol {
                          *count = 1;
                          return PortalMarker{t.kind, t.from_floor, t.to_floor};
                        },
                    },
                    c);
}

}  // namespace

NodeRef replay(const TerseScript& script, const BuildingMap& map, CornerRule rule) {
  NodeRef pos = script.origin;
  if (!map.is_free(pos)) {
    throw Error(ErrorCode::kCollisionDuringReplay, "origin " + to_string(pos) + " is not free");
  }
  for (const TerseCommand& c : script.commands) {
    int count = 0;
    const PathSymbol s = symbol_of(c, &count);
    if (count < 1) throw Error(ErrorCode::kInvalidArgument, "move count must be >= 1");
    advance(map, pos, s, count, rule, ErrorCode::kCollisionDuringReplay);
  }
  return pos;
}

double script_cost(const TerseScript& script, const BuildingMap& map) {
  NodeRef pos = script.origin;
  double total = 0.0;
  for (const TerseCommand& c : script.commands) {
    int count = 0;
    const PathSymbol s = symbol_of(c, &count);
    total += advance(map, pos, s, count, CornerRule::kPermissive, ErrorCode::kCollisionDuringReplay);
  }
  return total;
}

std::optional<double> walk_distance_meters(const Move& move, const BuildingMap& map) {
  if (!map.meters_per_cell) return std::nullopt;
  return move.count * move_for(move.dir).cost * *map.meters_per_cell;
}

}  // namespace wayfind
