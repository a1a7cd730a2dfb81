#include "fixtures.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>

namespace wayfind::testing {

BuildingMap single_floor(const std::vector<std::string>& rows, std::string name) {
  BuildingMap m;
  m.name = std::move(name);
  m.floors.push_back(Floor{0, "Ground Floor", OccupancyGrid::from_rows(rows), std::nullopt});
  return m;
}

BuildingMap all_free(int rows, int cols) {
  BuildingMap m;
  m.name = "open";
  m.floors.push_back(Floor{0, "Ground Floor", OccupancyGrid(rows, cols), std::nullopt});
  return m;
}

Floor random_floor(FloorId id, std::string label, int rows, int cols, double density,
                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution blocked(density);
  OccupancyGrid g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g.set_free({i, j}, !blocked(rng));
  }
  return Floor{id, std::move(label), std::move(g), std::nullopt};
}

BuildingMap random_grid(int rows, int cols, double density, std::uint64_t seed) {
  BuildingMap m;
  m.name = "random";
  m.floors.push_back(random_floor(0, "Ground Floor", rows, cols, density, seed));
  return m;
}

BuildingMap two_floor_mall() {
  BuildingMap m;
  m.name = "Two-floor mall";
  m.floors.push_back(Floor{0, "Ground Floor",
                           OccupancyGrid::from_rows(std::vector<std::string>{
                               "1111111111111111",
                               "1111111111111111",
                               "1110000001111111",
                               "1110000001111111",
                               "1111111111111111",
                               "1111111111111111",
                               "1111111111100111",
                               "1111111111100111",
                               "0000000111111111",
                               "1111111111111111",
                               "1111111111111111",
                               "1111111111111111",
                           }),
                           std::nullopt});
  m.floors.push_back(Floor{1, "First Floor",
                           OccupancyGrid::from_rows(std::vector<std::string>{
                               "1111111111111111",
                               "1111111111111111",
                               "1111100000011111",
                               "1111100000011111",
                               "1111111111111111",
                               "1111111111111111",
                               "1111111111111111",
                               "1111111100000000",
                               "1111111111111111",
                               "1111111111111111",
                               "1111111111111111",
                               "1111111111111111",
                           }),
                           std::nullopt});
  m.portals.push_back(Portal{PortalKind::kEscalator, {0, {5, 14}}, {1, {5, 2}}, 1.0});
  m.portals.push_back(Portal{PortalKind::kElevator, {0, {0, 0}}, {1, {11, 0}}, 8.0});
  m.pois.push_back(Poi{"Main Entrance", {0, {11, 1}}});
  m.pois.push_back(Poi{"Food Court", {1, {1, 13}}});
  m.pois.push_back(Poi{"Pharmacy", {0, {1, 12}}});
  return m;
}

namespace {

void block_rect(OccupancyGrid& g, int i0, int j0, int i1, int j1) {
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j <= j1; ++j) g.set_free({i, j}, false);
  }
}

// Nearest free cell to `target` (row-major scan by distance) within `cells`.
NodeRef nearest(const std::vector<NodeRef>& cells, FloorId floor, CellCoord target) {
  NodeRef best{};
  int best_d = -1;
  for (const NodeRef& n : cells) {
    if (n.floor != floor) continue;
    const int d = std::abs(n.cell.i - target.i) + std::abs(n.cell.j - target.j);
    if (best_d < 0 || d < best_d) {
      best_d = d;
      best = n;
    }
  }
  return best;
}

// Components of one floor only, largest first.
std::vector<NodeRef> largest_on_floor(const Floor& f) {
  BuildingMap single;
  single.floors.push_back(f);
  return largest_component(single);
}

}  // namespace

BuildingMap terminal_90x130() {
  OccupancyGrid g(90, 130);
  for (int j = 0; j < 130; ++j) {
    g.set_free({0, j}, false);
    g.set_free({89, j}, false);
  }
  for (int i = 0; i < 90; ++i) {
    g.set_free({i, 0}, false);
    g.set_free({i, 129}, false);
  }
  block_rect(g, 10, 20, 30, 50);
  block_rect(g, 60, 30, 80, 100);
  block_rect(g, 35, 60, 50, 120);
  block_rect(g, 5, 70, 25, 110);
  block_rect(g, 40, 25, 45, 45);
  BuildingMap m;
  m.name = "Terminal";
  m.floors.push_back(Floor{0, "Departures", std::move(g), std::nullopt});
  m.pois.push_back(Poi{"Southwest gate", {0, {53, 16}}});
  m.pois.push_back(Poi{"Security", {0, {8, 60}}});
  m.pois.push_back(Poi{"Gate 12", {0, {85, 120}}});
  return m;
}

BuildingMap airport_120x190(std::uint64_t seed) {
  BuildingMap m;
  m.name = "Airport 120x190";
  m.floors.push_back(random_floor(0, "Terminal", 120, 190, 0.4, seed));
  return m;
}

BuildingMap mall_two_floor_large(std::uint64_t seed) {
  BuildingMap m;
  m.name = "Mall (two floors)";
  m.floors.push_back(random_floor(0, "Ground Floor", 80, 130, 0.4, seed));
  m.floors.push_back(random_floor(1, "First Floor", 80, 100, 0.4, seed + 1));
  const auto ground = largest_on_floor(m.floors[0]);
  const auto first = largest_on_floor(m.floors[1]);
  m.portals.push_back(Portal{PortalKind::kEscalator, nearest(ground, 0, {20, 60}),
                             nearest(first, 1, {20, 50}), 1.0});
  m.portals.push_back(Portal{PortalKind::kEscalator, nearest(ground, 0, {60, 110}),
                             nearest(first, 1, {60, 85}), 1.0});
  m.portals.push_back(Portal{PortalKind::kElevator, nearest(ground, 0, {40, 10}),
                             nearest(first, 1, {40, 10}), 3.0});
  return m;
}

std::vector<NodeRef> largest_component(const BuildingMap& map) {
  std::map<NodeRef, int> label;
  std::multimap<NodeRef, NodeRef> hops;
  for (const Portal& p : map.portals) {
    hops.emplace(p.a, p.b);
    hops.emplace(p.b, p.a);
  }
  std::vector<NodeRef> best;
  int next = 0;
  for (const Floor& f : map.floors) {
    for (int i = 0; i < f.grid.rows(); ++i) {
      for (int j = 0; j < f.grid.cols(); ++j) {
        const NodeRef seed{f.id, {i, j}};
        if (!f.grid.is_free(seed.cell) || label.count(seed)) continue;
        std::vector<NodeRef> comp;
        std::deque<NodeRef> queue{seed};
        label[seed] = next;
        while (!queue.empty()) {
          const NodeRef u = queue.front();
          queue.pop_front();
          comp.push_back(u);
          const OccupancyGrid& g = map.find_floor(u.floor)->grid;
          for (int di = -1; di <= 1; ++di) {
            for (int dj = -1; dj <= 1; ++dj) {
              const NodeRef v{u.floor, {u.cell.i + di, u.cell.j + dj}};
              if ((di || dj) && g.is_free(v.cell) && !label.count(v)) {
                label[v] = next;
                queue.push_back(v);
              }
            }
          }
          for (auto [it, end] = hops.equal_range(u); it != end; ++it) {
            if (map.is_free(it->second) && !label.count(it->second)) {
              label[it->second] = next;
              queue.push_back(it->second);
            }
          }
        }
        ++next;
        if (comp.size() > best.size()) best = std::move(comp);
      }
    }
  }
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace wayfind::testing
