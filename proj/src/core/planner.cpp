#include "wayfind/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "wayfind/error.hpp"

namespace wayfind {

std::string_view to_string(CornerRule rule) {
  return rule == CornerRule::kStrict ? "strict" : "permissive";
}

std::optional<CornerRule> parse_corner_rule(std::string_view text) {
  if (iequals(text, "permissive")) return CornerRule::kPermissive;
  if (iequals(text, "strict")) return CornerRule::kStrict;
  return std::nullopt;
}

std::string_view compass_code(Direction d) {
  switch (d) {
    case Direction::kN: return "N";
    case Direction::kS: return "S";
    case Direction::kW: return "W";
    case Direction::kE: return "E";
    case Direction::kNW: return "NW";
    case Direction::kNE: return "NE";
    case Direction::kSW: return "SW";
    case Direction::kSE: return "SE";
  }
  return "N";
}

std::optional<Direction> parse_compass_code(std::string_view code) {
  for (const MoveOffset& m : kMoves) {
    if (iequals(compass_code(m.compass), code)) return m.compass;
  }
  return std::nullopt;
}

const MoveOffset& move_for(Direction d) {
  return kMoves[static_cast<std::size_t>(d)];
}

std::optional<Direction> direction_of(int di, int dj) {
  for (const MoveOffset& m : kMoves) {
    if (m.di == di && m.dj == dj) return m.compass;
  }
  return std::nullopt;
}

bool is_diagonal(Direction d) {
  const MoveOffset& m = move_for(d);
  return m.di != 0 && m.dj != 0;
}

bool step_allowed(const OccupancyGrid& grid, CellCoord from, Direction d, CornerRule rule) {
  const MoveOffset& m = move_for(d);
  const CellCoord to{from.i + m.di, from.j + m.dj};
  if (!grid.is_free(to)) return false;
  if (rule == CornerRule::kStrict && m.di != 0 && m.dj != 0) {
    return grid.is_free({from.i + m.di, from.j}) && grid.is_free({from.i, from.j + m.dj});
  }
  return true;
}

double chebyshev(CellCoord a, CellCoord b) {
  return static_cast<double>(std::max(std::abs(a.i - b.i), std::abs(a.j - b.j)));
}

double octile(CellCoord a, CellCoord b) {
  const int di = std::abs(a.i - b.i);
  const int dj = std::abs(a.j - b.j);
  const int lo = std::min(di, dj);
  const int hi = std::max(di, dj);
  return kSqrt2 * lo + (hi - lo);
}

std::vector<Edge> neighbors(const BuildingMap& map, const NodeRef& node, CornerRule rule) {
  const Floor* floor = map.find_floor(node.floor);
  if (floor == nullptr) {
    throw Error(ErrorCode::kUnknownFloor, "unknown floor " + std::to_string(node.floor));
  }
  if (!floor->grid.is_free(node.cell)) {
    throw Error(ErrorCode::kNodeBlocked, to_string(node) + " is not a free cell");
  }
  std::vector<Edge> out;
  for (const MoveOffset& m : kMoves) {
    if (step_allowed(floor->grid, node.cell, m.compass, rule)) {
      out.push_back({{node.floor, {node.cell.i + m.di, node.cell.j + m.dj}}, m.cost});
    }
  }
  for (const Portal& p : map.portals) {
    if (p.a == node && map.is_free(p.b)) out.push_back({p.b, p.cost});
    if (p.b == node && map.is_free(p.a)) out.push_back({p.a, p.cost});
  }
  return out;
}

std::optional<double> edge_cost(const BuildingMap& map, const NodeRef& u, const NodeRef& v,
                                CornerRule rule) {
  if (!map.is_free(u) || !map.is_free(v)) return std::nullopt;
  std::optional<double> best;
  if (u.floor == v.floor) {
    const auto d = direction_of(v.cell.i - u.cell.i, v.cell.j - u.cell.j);
    if (d && step_allowed(map.find_floor(u.floor)->grid, u.cell, *d, rule)) best = move_for(*d).cost;
  }
  for (const Portal& p : map.portals) {
    if ((p.a == u && p.b == v) || (p.b == u && p.a == v)) {
      if (!best || p.cost < *best) best = p.cost;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Flattens all floors into one index space: offset[k] + i * cols + j.
class JointIndex {
 public:
  explicit JointIndex(const BuildingMap& map) : map_(map) {
    std::size_t total = 0;
    for (const Floor& f : map.floors) {
      offsets_.push_back(total);
      total += f.grid.size();
    }
    size_ = total;
    for (const Portal& p : map.portals) {
      const auto a = index_of(p.a);
      const auto b = index_of(p.b);
      if (a == kNone || b == kNone || !map.is_free(p.a) || !map.is_free(p.b)) continue;
      portal_edges_[a].push_back({b, p.cost});
      portal_edges_[b].push_back({a, p.cost});
    }
  }

  std::size_t size() const { return size_; }

  int floor_slot(FloorId id) const {
    for (std::size_t k = 0; k < map_.floors.size(); ++k) {
      if (map_.floors[k].id == id) return static_cast<int>(k);
    }
    return -1;
  }

  std::uint32_t index_of(const NodeRef& n) const {
    const int k = floor_slot(n.floor);
    if (k < 0) return kNone;
    const OccupancyGrid& g = map_.floors[static_cast<std::size_t>(k)].grid;
    if (!g.in_bounds(n.cell)) return kNone;
    return static_cast<std::uint32_t>(offsets_[static_cast<std::size_t>(k)] + g.index(n.cell));
  }

  NodeRef node_of(std::uint32_t idx, int slot) const {
    const Floor& f = map_.floors[static_cast<std::size_t>(slot)];
    const std::size_t local = idx - offsets_[static_cast<std::size_t>(slot)];
    const int cols = f.grid.cols();
    return {f.id, {static_cast<int>(local / static_cast<std::size_t>(cols)),
                   static_cast<int>(local % static_cast<std::size_t>(cols))}};
  }

  int slot_of(std::uint32_t idx) const {
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), static_cast<std::size_t>(idx));
    return static_cast<int>(std::distance(offsets_.begin(), it)) - 1;
  }

  const std::vector<std::pair<std::uint32_t, double>>* portals_from(std::uint32_t idx) const {
    const auto it = portal_edges_.find(idx);
    return it == portal_edges_.end() ? nullptr : &it->second;
  }

 private:
  const BuildingMap& map_;
  std::vector<std::size_t> offsets_;
  std::size_t size_ = 0;
  std::unordered_map<std::uint32_t, std::vector<std::pair<std::uint32_t, double>>> portal_edges_;
};

void check_endpoints(const BuildingMap& map, const NodeRef& start, const NodeRef& goal) {
  if (!map.is_free(start)) {
    throw Error(ErrorCode::kStartBlocked, "start " + to_string(start) + " is not a free cell");
  }
  if (!map.is_free(goal)) {
    throw Error(ErrorCode::kGoalBlocked, "goal " + to_string(goal) + " is not a free cell");
  }
}

struct OpenEntry {
  double f;
  double g;
  FloorId floor;
  int i;
  int j;
  std::uint32_t idx;
  int slot;
};

struct OpenEntryGreater {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g > b.g;
    if (a.floor != b.floor) return a.floor > b.floor;
    if (a.i != b.i) return a.i > b.i;
    return a.j > b.j;
  }
};

// Lower bound on the remaining cost to the goal from any cell. Each floor
// holds anchors (the goal and portal endpoints) with their exact distance to
// the goal in the graph where same-floor anchors are joined by Chebyshev
// distance and portal ends by the portal cost. h(c) is the minimum of
// chebyshev(c, anchor) + distance over the anchors on c's floor.
class PortalBound {
 public:
  PortalBound(const BuildingMap& map, const JointIndex& index, const NodeRef& goal)
      : anchors_(map.floors.size()) {
    std::vector<NodeRef> nodes{goal};
    for (const Portal& p : map.portals) {
      nodes.push_back(p.a);
      nodes.push_back(p.b);
    }
    const std::size_t k = nodes.size();
    std::vector<double> dist(k, kInf);
    std::vector<std::uint8_t> done(k, 0);
    dist[0] = 0.0;
    for (std::size_t round = 0; round < k; ++round) {
      std::size_t u = k;
      for (std::size_t v = 0; v < k; ++v) {
        if (!done[v] && dist[v] < kInf && (u == k || dist[v] < dist[u])) u = v;
      }
      if (u == k) break;
      done[u] = 1;
      for (std::size_t v = 0; v < k; ++v) {
        if (done[v]) continue;
        double w = kInf;
        if (nodes[u].floor == nodes[v].floor) w = chebyshev(nodes[u].cell, nodes[v].cell);
        // Node 2p+1 and 2p+2 are the ends of portal p.
        if (u > 0 && v > 0 && (u - 1) / 2 == (v - 1) / 2) {
          w = std::min(w, map.portals[(u - 1) / 2].cost);
        }
        dist[v] = std::min(dist[v], dist[u] + w);
      }
    }
    for (std::size_t v = 0; v < k; ++v) {
      if (dist[v] == kInf) continue;
      const int slot = index.floor_slot(nodes[v].floor);
      if (slot >= 0) anchors_[static_cast<std::size_t>(slot)].push_back({nodes[v].cell, dist[v]});
    }
  }

  double operator()(int slot, CellCoord c) const {
    double best = kInf;
    for (const auto& [cell, d] : anchors_[static_cast<std::size_t>(slot)]) {
      best = std::min(best, chebyshev(c, cell) + d);
    }
    // Floors that cannot reach the goal get 0 so the search still terminates normally.
    return best == kInf ? 0.0 : best;
  }

 private:
  std::vector<std::vector<std::pair<CellCoord, double>>> anchors_;
};

}  // namespace

Path astar(const BuildingMap& map, const NodeRef& start, const NodeRef& goal, CornerRule rule) {
  const auto t0 = std::chrono::steady_clock::now();
  check_endpoints(map, start, goal);

  const JointIndex index(map);
  const std::uint32_t s = index.index_of(start);
  const std::uint32_t t = index.index_of(goal);

  std::vector<double> g(index.size(), kInf);
  std::vector<std::uint32_t> came_from(index.size(), kNone);
  std::vector<std::uint8_t> closed(index.size(), 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenEntryGreater> open;

  const PortalBound h(map, index, goal);

  Path path;
  const int start_slot = index.floor_slot(start.floor);
  g[s] = 0.0;
  open.push({h(start_slot, start.cell), 0.0, start.floor, start.cell.i, start.cell.j, s, start_slot});
  ++path.stats.pushed_nodes;

  bool reached = false;
  while (!open.empty()) {
    const OpenEntry u = open.top();
    open.pop();
    if (u.idx == t) {
      reached = true;
      break;
    }
    if (closed[u.idx] || u.g > g[u.idx]) continue;
    closed[u.idx] = 1;
    ++path.stats.expanded_nodes;

    const Floor& floor = map.floors[static_cast<std::size_t>(u.slot)];
    const CellCoord cell{u.i, u.j};
    auto relax = [&](std::uint32_t v, int slot, CellCoord vc, double cost) {
      const double gv = g[u.idx] + cost;
      if (gv < g[v]) {
        g[v] = gv;
        came_from[v] = u.idx;
        // The bound is consistent, so this only fires on rounding ties.
        closed[v] = 0;
        open.push({gv + h(slot, vc), gv, map.floors[static_cast<std::size_t>(slot)].id, vc.i, vc.j, v, slot});
        ++path.stats.pushed_nodes;
      }
    };
    for (const MoveOffset& m : kMoves) {
      if (!step_allowed(floor.grid, cell, m.compass, rule)) continue;
      const CellCoord vc{cell.i + m.di, cell.j + m.dj};
      const std::uint32_t v = u.idx + static_cast<std::uint32_t>(m.di * floor.grid.cols() + m.dj);
      relax(v, u.slot, vc, m.cost);
    }
    if (const auto* hops = index.portals_from(u.idx)) {
      for (const auto& [v, cost] : *hops) {
        const int slot = index.slot_of(v);
        relax(v, slot, index.node_of(v, slot).cell, cost);
      }
    }
  }

  if (!reached) {
    path.stats.wall_time = std::chrono::steady_clock::now() - t0;
    throw Error(ErrorCode::kNoPath, "no path from " + to_string(start) + " to " + to_string(goal));
  }

  std::vector<std::uint32_t> chain{t};
  for (std::uint32_t n = t; n != s;) {
    n = came_from[n];
    if (n == kNone) throw Error(ErrorCode::kNoPath, "broken predecessor chain");
    chain.push_back(n);
  }
  path.nodes.reserve(chain.size());
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    path.nodes.push_back(index.node_of(*it, index.slot_of(*it)));
  }
  path.total_cost = g[t];
  path.stats.wall_time = std::chrono::steady_clock::now() - t0;
  return path;
}

Path dijkstra_oracle(const BuildingMap& map, const NodeRef& start, const NodeRef& goal,
                     CornerRule rule) {
  const auto t0 = std::chrono::steady_clock::now();
  check_endpoints(map, start, goal);

  std::map<NodeRef, double> dist{{start, 0.0}};
  std::map<NodeRef, NodeRef> parent;
  std::set<NodeRef> settled;
  std::set<std::pair<double, NodeRef>> frontier{{0.0, start}};

  Path path;
  path.stats.pushed_nodes = 1;
  while (!frontier.empty()) {
    const auto [d, u] = *frontier.begin();
    frontier.erase(frontier.begin());
    settled.insert(u);
    ++path.stats.expanded_nodes;
    for (const Edge& e : neighbors(map, u, rule)) {
      if (settled.count(e.to)) continue;
      const double nd = d + e.cost;
      auto it = dist.find(e.to);
      if (it == dist.end() || nd < it->second) {
        if (it != dist.end()) frontier.erase({it->second, e.to});
        dist[e.to] = nd;
        parent[e.to] = u;
        frontier.insert({nd, e.to});
        ++path.stats.pushed_nodes;
      }
    }
  }

  if (!settled.count(goal)) {
    throw Error(ErrorCode::kNoPath, "no path from " + to_string(start) + " to " + to_string(goal));
  }
  for (NodeRef n = goal;; n = parent.at(n)) {
    path.nodes.push_back(n);
    if (n == start) break;
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  path.total_cost = dist.at(goal);
  path.stats.wall_time = std::chrono::steady_clock::now() - t0;
  return path;
}

std::vector<std::string> path_violations(const BuildingMap& map, const Path& path,
                                         const NodeRef& start, const NodeRef& goal,
                                         CornerRule rule) {
  std::vector<std::string> out;
  if (path.nodes.empty()) {
    out.push_back("path has no nodes");
    return out;
  }
  if (path.nodes.front() != start) out.push_back("first node is not the start");
  if (path.nodes.back() != goal) out.push_back("last node is not the goal");

  auto free_cell = [&](const NodeRef& n) {
    const Floor* f = map.find_floor(n.floor);
    return f != nullptr && n.cell.i >= 0 && n.cell.i < f->grid.rows() && n.cell.j >= 0 &&
           n.cell.j < f->grid.cols() && f->grid.cells()[f->grid.index(n.cell)] == 1;
  };

  double sum = 0.0;
  for (std::size_t k = 0; k < path.nodes.size(); ++k) {
    const NodeRef& u = path.nodes[k];
    if (!free_cell(u)) out.push_back("node " + std::to_string(k) + " " + to_string(u) + " is not free");
    if (k + 1 == path.nodes.size()) break;
    const NodeRef& v = path.nodes[k + 1];
    const std::string pair = "step " + std::to_string(k) + " " + to_string(u) + " -> " + to_string(v);

    std::optional<double> cost;
    if (u.floor == v.floor) {
      const int di = v.cell.i - u.cell.i;
      const int dj = v.cell.j - u.cell.j;
      const int manhattan = std::abs(di) + std::abs(dj);
      if (std::abs(di) <= 1 && std::abs(dj) <= 1 && manhattan > 0) {
        cost = manhattan == 1 ? 1.0 : std::sqrt(2.0);
        if (manhattan == 2 && rule == CornerRule::kStrict &&
            !(free_cell({u.floor, {u.cell.i + di, u.cell.j}}) &&
              free_cell({u.floor, {u.cell.i, u.cell.j + dj}}))) {
          out.push_back(pair + " cuts a blocked corner");
        }
      }
    }
    for (const Portal& p : map.portals) {
      const bool joins = (p.a == u && p.b == v) || (p.a == v && p.b == u);
      if (joins && (!cost || p.cost < *cost)) cost = p.cost;
    }
    if (!cost) {
      out.push_back(pair + " is neither an 8-neighbour move nor a portal");
    } else {
      sum += *cost;
    }
  }
  if (std::abs(sum - path.total_cost) > 1e-9) {
    out.push_back("total_cost " + std::to_string(path.total_cost) + " differs from edge sum " +
                  std::to_string(sum));
  }
  return out;
}

}  // namespace wayfind
