#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "wayfind/error.hpp"
#include "wayfind/planner.hpp"

using namespace wayfind;
using namespace wayfind::testing;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no wayfind::Error thrown";
  return ErrorCode::kInternal;
}

// Independent edge list: every free cell, 8 offsets written out by hand,
// corner rule applied literally, portals both ways.
struct Graph {
  std::vector<NodeRef> nodes;
  std::map<NodeRef, int> id;
  std::vector<std::vector<std::pair<int, double>>> adj;
};

Graph build_graph(const BuildingMap& m, CornerRule rule) {
  Graph g;
  for (const auto& f : m.floors)
    for (int i = 0; i < f.grid.rows(); ++i)
      for (int j = 0; j < f.grid.cols(); ++j)
        if (f.grid.is_free({i, j})) {
          g.id[{f.id, {i, j}}] = static_cast<int>(g.nodes.size());
          g.nodes.push_back({f.id, {i, j}});
        }
  g.adj.resize(g.nodes.size());
  const int offs[8][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    const NodeRef n = g.nodes[u];
    const auto& grid = m.find_floor(n.floor)->grid;
    for (const auto& o : offs) {
      const CellCoord c{n.cell.i + o[0], n.cell.j + o[1]};
      if (!grid.is_free(c)) continue;
      const bool diag = o[0] != 0 && o[1] != 0;
      if (diag && rule == CornerRule::kStrict &&
          (!grid.is_free({n.cell.i + o[0], n.cell.j}) || !grid.is_free({n.cell.i, n.cell.j + o[1]})))
        continue;
      g.adj[u].push_back({g.id.at({n.floor, c}), diag ? std::sqrt(2.0) : 1.0});
    }
  }
  for (const auto& p : m.portals) {
    const int a = g.id.at(p.a), b = g.id.at(p.b);
    g.adj[a].push_back({b, p.cost});
    g.adj[b].push_back({a, p.cost});
  }
  return g;
}

// Bellman-Ford relaxation to a fixed point; slow and obviously correct.
std::vector<double> distances(const Graph& g, const NodeRef& s) {
  std::vector<double> d(g.nodes.size(), std::numeric_limits<double>::infinity());
  d[g.id.at(s)] = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t u = 0; u < g.nodes.size(); ++u)
      for (auto [v, c] : g.adj[u])
        if (d[u] + c < d[v] - 1e-12) {
          d[v] = d[u] + c;
          changed = true;
        }
  }
  return d;
}

NodeRef at(int i, int j, FloorId f = 0) { return {f, {i, j}}; }

std::pair<NodeRef, NodeRef> random_pair(const std::vector<NodeRef>& comp, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, comp.size() - 1);
  NodeRef a = comp[pick(rng)], b = comp[pick(rng)];
  while (comp.size() > 1 && b == a) b = comp[pick(rng)];
  return {a, b};
}

}  // namespace

TEST(Neighbors, InteriorOfOpenGridHasEight) {
  const auto m = all_free(3, 3);
  const auto es = neighbors(m, at(1, 1));
  ASSERT_EQ(es.size(), 8u);
  int ortho = 0, diag = 0;
  for (const auto& e : es) {
    if (e.cost == 1.0) ++ortho;
    if (std::abs(e.cost - std::sqrt(2.0)) < 1e-15) ++diag;
  }
  EXPECT_EQ(ortho, 4);
  EXPECT_EQ(diag, 4);
  // Fixed table order N, S, W, E, NW, NE, SW, SE.
  const std::vector<NodeRef> order{at(0, 1), at(2, 1), at(1, 0), at(1, 2),
                                   at(0, 0), at(0, 2), at(2, 0), at(2, 2)};
  for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(es[k].to, order[k]);
}

TEST(Neighbors, CornerHasThree) {
  EXPECT_EQ(neighbors(all_free(3, 3), at(0, 0)).size(), 3u);
}

TEST(Neighbors, StrictRuleDropsCutCorners) {
  // Center with east (1,2) and south (2,1) blocked; SE (2,2) is free.
  const auto m = single_floor({"111", "110", "101"});
  std::set<NodeRef> strict, permissive;
  for (const auto& e : neighbors(m, at(1, 1), CornerRule::kStrict)) strict.insert(e.to);
  for (const auto& e : neighbors(m, at(1, 1), CornerRule::kPermissive)) permissive.insert(e.to);
  EXPECT_EQ(strict, (std::set<NodeRef>{at(0, 1), at(1, 0), at(0, 0)}));
  EXPECT_EQ(permissive,
            (std::set<NodeRef>{at(0, 1), at(1, 0), at(0, 0), at(0, 2), at(2, 0), at(2, 2)}));
}

TEST(Neighbors, PortalsFollowGridMoves) {
  const auto m = two_floor_mall();
  const auto es = neighbors(m, at(5, 14, 0));
  ASSERT_FALSE(es.empty());
  EXPECT_EQ(es.back().to, at(5, 2, 1));
  EXPECT_EQ(es.back().cost, 1.0);
  EXPECT_EQ(code_of([&] { neighbors(m, at(8, 0, 0)); }), ErrorCode::kNodeBlocked);
  EXPECT_EQ(code_of([&] { neighbors(m, at(0, 0, 3)); }), ErrorCode::kUnknownFloor);
}

TEST(Heuristic, Chebyshev) {
  EXPECT_EQ(chebyshev({0, 0}, {3, 5}), 5.0);
  EXPECT_EQ(chebyshev({4, 4}, {4, 4}), 0.0);
  EXPECT_EQ(chebyshev({7, 2}, {1, 2}), 6.0);
}

TEST(Heuristic, AdmissibleOnOpenFloor) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(0, 60);
  for (int k = 0; k < 2000; ++k) {
    const CellCoord a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    const int di = std::abs(a.i - b.i), dj = std::abs(a.j - b.j);
    const double optimal = std::sqrt(2.0) * std::min(di, dj) + (std::max(di, dj) - std::min(di, dj));
    EXPECT_LE(chebyshev(a, b), optimal + 1e-12);
    EXPECT_NEAR(octile(a, b), optimal, 1e-9);
  }
}

TEST(Heuristic, ConsistentOnEveryEdge) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto m = random_grid(15, 15, 0.25, seed);
    const CellCoord goal{7, 7};
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j) {
        if (!m.floors[0].grid.is_free({i, j})) continue;
        for (const auto& e : neighbors(m, at(i, j)))
          EXPECT_LE(chebyshev({i, j}, goal), e.cost + chebyshev(e.to.cell, goal) + 1e-12);
      }
  }
}

TEST(Astar, CorridorOneByFive) {
  const auto p = astar(all_free(1, 5), at(0, 0), at(0, 4));
  EXPECT_DOUBLE_EQ(p.total_cost, 4.0);
  EXPECT_EQ(p.nodes.size(), 5u);
}

TEST(Astar, ThreeByThreeDiagonalMatchesFloydWarshall) {
  const auto m = all_free(3, 3);
  // Floyd-Warshall over the 9 cells with hand-written 8-way adjacency.
  double d[9][9];
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) {
      const int di = std::abs(a / 3 - b / 3), dj = std::abs(a % 3 - b % 3);
      d[a][b] = a == b ? 0.0
                : (di <= 1 && dj <= 1) ? (di + dj == 2 ? std::sqrt(2.0) : 1.0)
                                       : std::numeric_limits<double>::infinity();
    }
  for (int k = 0; k < 9; ++k)
    for (int a = 0; a < 9; ++a)
      for (int b = 0; b < 9; ++b) d[a][b] = std::min(d[a][b], d[a][k] + d[k][b]);
  const auto p = astar(m, at(0, 0), at(2, 2));
  EXPECT_NEAR(p.total_cost, d[0][8], 1e-12);
  EXPECT_NEAR(p.total_cost, 2.8284271247461903, 1e-12);
  EXPECT_EQ(p.nodes, (std::vector<NodeRef>{at(0, 0), at(1, 1), at(2, 2)}));
}

TEST(Astar, EnclosedStartHasNoPath) {
  const auto m = single_floor({"11111", "10001", "10101", "10001", "11111"});
  EXPECT_EQ(code_of([&] { astar(m, at(2, 2), at(0, 0)); }), ErrorCode::kNoPath);
  EXPECT_EQ(code_of([&] { dijkstra_oracle(m, at(2, 2), at(0, 0)); }), ErrorCode::kNoPath);
}

TEST(Astar, StrictRuleBlocksSqueezeThatPermissiveAllows) {
  const auto m = single_floor({"10", "01"});
  EXPECT_NEAR(astar(m, at(0, 0), at(1, 1)).total_cost, std::sqrt(2.0), 1e-12);
  EXPECT_EQ(code_of([&] { astar(m, at(0, 0), at(1, 1), CornerRule::kStrict); }),
            ErrorCode::kNoPath);
}

TEST(Astar, EndpointErrors) {
  const auto m = single_floor({"10", "11"});
  EXPECT_EQ(code_of([&] { astar(m, at(0, 1), at(1, 1)); }), ErrorCode::kStartBlocked);
  EXPECT_EQ(code_of([&] { astar(m, at(1, 1), at(0, 1)); }), ErrorCode::kGoalBlocked);
  EXPECT_EQ(code_of([&] { astar(m, at(1, 1), at(5, 5)); }), ErrorCode::kGoalBlocked);
  EXPECT_EQ(code_of([&] { astar(m, at(0, 0, 2), at(1, 1)); }), ErrorCode::kStartBlocked);
}

TEST(Astar, SameStartAndGoal) {
  const auto p = astar(all_free(2, 2), at(1, 1), at(1, 1));
  EXPECT_EQ(p.nodes, (std::vector<NodeRef>{at(1, 1)}));
  EXPECT_EQ(p.total_cost, 0.0);
}

TEST(Astar, TwoFloorPathUsesEscalatorEndpointsConsecutively) {
  const auto m = two_floor_mall();
  const NodeRef s = m.find_poi("Main Entrance")->location;
  const NodeRef t = m.find_poi("Food Court")->location;
  const auto p = astar(m, s, t);
  const auto g = build_graph(m, CornerRule::kPermissive);
  EXPECT_NEAR(p.total_cost, distances(g, s)[g.id.at(t)], 1e-9);
  const auto it = std::adjacent_find(p.nodes.begin(), p.nodes.end(), [](auto& a, auto& b) {
    return a == at(5, 14, 0) && b == at(5, 2, 1);
  });
  EXPECT_NE(it, p.nodes.end());
  EXPECT_TRUE(path_violations(m, p, s, t, CornerRule::kPermissive).empty());
}

TEST(Astar, CostsMatchIndependentOracleOnMultiFloorMaps) {
  for (const auto& m : {two_floor_mall(), mall_two_floor_large(3)}) {
    for (auto rule : {CornerRule::kPermissive, CornerRule::kStrict}) {
      const auto g = build_graph(m, rule);
      const auto comp = largest_component(m);
      std::mt19937_64 rng(17);
      for (int k = 0; k < 6; ++k) {
        auto [s, t] = random_pair(comp, rng);
        const double expect = distances(g, s)[g.id.at(t)];
        if (!std::isfinite(expect)) {
          EXPECT_EQ(code_of([&] { astar(m, s, t, rule); }), ErrorCode::kNoPath);
          continue;
        }
        const auto p = astar(m, s, t, rule);
        EXPECT_NEAR(p.total_cost, expect, 1e-9) << to_string(s) << " -> " << to_string(t);
        EXPECT_TRUE(path_violations(m, p, s, t, rule).empty());
      }
    }
  }
}

TEST(Astar, PortalDetourCheaperThanSameFloorDistance) {
  // Leaving the goal floor and coming back beats walking straight there, so
  // plain Chebyshev distance on the goal floor would overestimate.
  auto m = single_floor({std::string(40, '1')}, "detour");
  m.floors.push_back({1, "Upper", OccupancyGrid::from_rows(std::vector<std::string>{"111"}), {}});
  m.portals.push_back({PortalKind::kElevator, at(0, 9, 0), at(0, 0, 1), 1.0});
  m.portals.push_back({PortalKind::kElevator, at(0, 2, 1), at(0, 20, 0), 1.0});
  const auto p = astar(m, at(0, 10), at(0, 20));
  EXPECT_NEAR(p.total_cost, 5.0, 1e-12);
  EXPECT_NEAR(p.total_cost, dijkstra_oracle(m, at(0, 10), at(0, 20)).total_cost, 1e-12);
  EXPECT_TRUE(path_violations(m, p, at(0, 10), at(0, 20), CornerRule::kPermissive).empty());
}

TEST(Oracle, FiftySeededRandomGridsMatch) {
  std::mt19937_64 rng(2024);
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto m = random_grid(20, 20, 0.3, seed);
    const auto comp = largest_component(m);
    auto [s, t] = random_pair(comp, rng);
    const auto a = astar(m, s, t);
    const auto d = dijkstra_oracle(m, s, t);
    EXPECT_NEAR(a.total_cost, d.total_cost, 1e-9) << seed;
    EXPECT_TRUE(path_violations(m, a, s, t, CornerRule::kPermissive).empty());
    ++solved;
  }
  EXPECT_EQ(solved, 50);
}

TEST(Oracle, DijkstraAgreesWithBellmanFord) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = random_grid(12, 12, 0.3, seed);
    const auto g = build_graph(m, CornerRule::kStrict);
    const auto comp = largest_component(m);
    std::mt19937_64 rng(seed);
    auto [s, t] = random_pair(comp, rng);
    const double expect = distances(g, s)[g.id.at(t)];
    if (!std::isfinite(expect)) continue;
    EXPECT_NEAR(dijkstra_oracle(m, s, t, CornerRule::kStrict).total_cost, expect, 1e-9);
  }
}

TEST(Oracle, UnreachableGoalMatches) {
  const auto m = single_floor({"110011", "110011"});
  EXPECT_EQ(code_of([&] { astar(m, at(0, 0), at(1, 5)); }), ErrorCode::kNoPath);
  EXPECT_EQ(code_of([&] { dijkstra_oracle(m, at(0, 0), at(1, 5)); }), ErrorCode::kNoPath);
}

TEST(Astar, DeterministicNodeSequences) {
  const auto m = airport_120x190();
  const auto comp = largest_component(m);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 5; ++k) {
    auto [s, t] = random_pair(comp, rng);
    const auto first = astar(m, s, t);
    for (int r = 0; r < 3; ++r) EXPECT_EQ(astar(m, s, t).nodes, first.nodes);
  }
}

TEST(Astar, ExpandsNoMoreThanDijkstraOnOpenGrid) {
  const auto m = all_free(50, 50);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> c(0, 49);
  for (int k = 0; k < 20; ++k) {
    const NodeRef s = at(c(rng), c(rng)), t = at(c(rng), c(rng));
    const auto a = astar(m, s, t);
    const auto d = dijkstra_oracle(m, s, t);
    EXPECT_LE(a.stats.expanded_nodes, d.stats.expanded_nodes);
    EXPECT_NEAR(a.total_cost, octile(s.cell, t.cell), 1e-9);
  }
}

TEST(Validator, FlagsBrokenPaths) {
  const auto m = all_free(3, 3);
  Path p = astar(m, at(0, 0), at(2, 2));
  EXPECT_TRUE(path_violations(m, p, at(0, 0), at(2, 2), CornerRule::kPermissive).empty());
  Path wrong_cost = p;
  wrong_cost.total_cost += 0.5;
  EXPECT_FALSE(path_violations(m, wrong_cost, at(0, 0), at(2, 2), CornerRule::kPermissive).empty());
  Path jump = p;
  jump.nodes = {at(0, 0), at(2, 2)};
  EXPECT_FALSE(path_violations(m, jump, at(0, 0), at(2, 2), CornerRule::kPermissive).empty());
  EXPECT_FALSE(path_violations(m, p, at(0, 1), at(2, 2), CornerRule::kPermissive).empty());
}

TEST(Moves, TableAndHelpers) {
  EXPECT_EQ(compass_code(Direction::kSE), "SE");
  EXPECT_EQ(parse_compass_code("NW"), Direction::kNW);
  EXPECT_EQ(parse_compass_code("X"), std::nullopt);
  EXPECT_EQ(direction_of(1, 1), Direction::kSE);
  EXPECT_EQ(direction_of(-1, 0), Direction::kN);
  EXPECT_EQ(direction_of(2, 0), std::nullopt);
  EXPECT_EQ(direction_of(0, 0), std::nullopt);
  EXPECT_TRUE(is_diagonal(Direction::kSW));
  EXPECT_FALSE(is_diagonal(Direction::kW));
  for (const auto& mv : kMoves) {
    EXPECT_EQ(direction_of(mv.di, mv.dj), mv.compass);
    EXPECT_EQ(mv.cost, (mv.di != 0 && mv.dj != 0) ? kSqrt2 : 1.0);
  }
}
