#include "wayfind/gridmap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "wayfind/error.hpp"

namespace wayfind {

std::string to_string(const CellCoord& cell) {
  return "(" + std::to_string(cell.i) + "," + std::to_string(cell.j) + ")";
}

std::string to_string(const NodeRef& node) {
  return "floor " + std::to_string(node.floor) + " " + to_string(node.cell);
}

OccupancyGrid::OccupancyGrid(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid dimensions must be positive, got " + std::to_string(rows) +
                    "x" + std::to_string(cols));
  }
  cells_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 1);
}

OccupancyGrid OccupancyGrid::from_rows(std::span<const std::string> rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "grid has no cells");
  }
  OccupancyGrid grid(static_cast<int>(rows.size()),
                     static_cast<int>(rows.front().size()));
  for (int i = 0; i < grid.rows_; ++i) {
    const std::string& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != grid.cols_) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid row " + std::to_string(i) + " has length " +
                      std::to_string(row.size()) + ", expected " +
                      std::to_string(grid.cols_));
    }
    for (int j = 0; j < grid.cols_; ++j) {
      const char c = row[static_cast<std::size_t>(j)];
      if (c != '0' && c != '1') {
        throw Error(ErrorCode::kInvalidArgument,
                    "grid row " + std::to_string(i) + " contains '" +
                        std::string(1, c) + "'");
      }
      grid.cells_[grid.index({i, j})] = c == '1' ? 1 : 0;
    }
  }
  return grid;
}

std::vector<std::string> OccupancyGrid::to_rows() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) {
    std::string row(static_cast<std::size_t>(cols_), '0');
    for (int j = 0; j < cols_; ++j) {
      if (cells_[index({i, j})]) row[static_cast<std::size_t>(j)] = '1';
    }
    out.push_back(std::move(row));
  }
  return out;
}

void OccupancyGrid::set_free(CellCoord c, bool free) {
  if (!in_bounds(c)) {
    throw Error(ErrorCode::kOutOfBounds, "cell " + to_string(c) + " outside " +
                                             std::to_string(rows_) + "x" +
                                             std::to_string(cols_) + " grid");
  }
  cells_[index(c)] = free ? 1 : 0;
}

std::size_t OccupancyGrid::free_count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

std::string_view to_string(PortalKind kind) {
  switch (kind) {
    case PortalKind::kEscalator: return "escalator";
    case PortalKind::kElevator: return "elevator";
    case PortalKind::kStaircase: return "staircase";
  }
  return "escalator";
}

std::optional<PortalKind> parse_portal_kind(std::string_view text) {
  if (iequals(text, "escalator")) return PortalKind::kEscalator;
  if (iequals(text, "elevator")) return PortalKind::kElevator;
  if (iequals(text, "staircase")) return PortalKind::kStaircase;
  return std::nullopt;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

const Floor* BuildingMap::find_floor(FloorId id) const noexcept {
  for (const Floor& f : floors) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

Floor* BuildingMap::find_floor(FloorId id) noexcept {
  for (Floor& f : floors) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

const Poi* BuildingMap::find_poi(std::string_view poi_name) const noexcept {
  for (const Poi& p : pois) {
    if (iequals(p.name, poi_name)) return &p;
  }
  return nullptr;
}

bool BuildingMap::is_free(const NodeRef& node) const noexcept {
  const Floor* f = find_floor(node.floor);
  return f != nullptr && f->grid.is_free(node.cell);
}

// ---------------------------------------------------------------------------

OccupancyGrid binarize_mask(const GrayImage& mask, int rows, int cols,
                            const BinarizeOptions& options) {
  if (mask.width <= 0 || mask.height <= 0 || mask.pixels.empty()) {
    throw Error(ErrorCode::kEmptyMask, "mask has no pixels");
  }
  if (mask.pixels.size() != static_cast<std::size_t>(mask.width) *
                                static_cast<std::size_t>(mask.height)) {
    throw Error(ErrorCode::kInvalidArgument, "mask pixel count does not match its size");
  }
  if (rows < 1 || cols < 1) {
    throw Error(ErrorCode::kInvalidArgument, "rows and cols must be >= 1");
  }
  if (rows > mask.height || cols > mask.width) {
    throw Error(ErrorCode::kGridLargerThanMask,
                "grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " exceeds mask " + std::to_string(mask.height) + "x" +
                    std::to_string(mask.width));
  }
  if (!(options.blocked_threshold > 0.0 && options.blocked_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "blocked_threshold must lie in (0, 1]");
  }

  const int block_h = mask.height / rows;
  const int block_w = mask.width / cols;

  // Column prefix sums of blocked pixels per pixel row keep this O(pixels).
  std::vector<int> blocked_in_band(static_cast<std::size_t>(mask.width));
  OccupancyGrid grid(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const int y0 = r * block_h;
    const int y1 = r == rows - 1 ? mask.height : y0 + block_h;
    std::fill(blocked_in_band.begin(), blocked_in_band.end(), 0);
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < mask.width; ++x) {
        if (mask.at(x, y) < options.luminance_cutoff) ++blocked_in_band[static_cast<std::size_t>(x)];
      }
    }
    for (int c = 0; c < cols; ++c) {
      const int x0 = c * block_w;
      const int x1 = c == cols - 1 ? mask.width : x0 + block_w;
      long blocked = 0;
      for (int x = x0; x < x1; ++x) blocked += blocked_in_band[static_cast<std::size_t>(x)];
      const long total = static_cast<long>(y1 - y0) * (x1 - x0);
      const double fraction = static_cast<double>(blocked) / static_cast<double>(total);
      grid.set_free({r, c}, !(fraction > options.blocked_threshold));
    }
  }
  return grid;
}

std::pair<int, int> suggest_dimensions(int image_width, int image_height,
                                       int max_dimension) {
  if (image_width < 1 || image_height < 1 || max_dimension < 1) {
    throw Error(ErrorCode::kInvalidArgument, "dimensions must be positive");
  }
  const double scale =
      static_cast<double>(max_dimension) / std::max(image_width, image_height);
  auto scaled = [&](int v) {
    return std::clamp(static_cast<int>(std::lround(v * scale)), 1, max_dimension);
  };
  int rows = scaled(image_height);
  int cols = scaled(image_width);
  rows = std::min(rows, image_height);
  cols = std::min(cols, image_width);
  return {rows, cols};
}

// ---------------------------------------------------------------------------

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDuplicateFloor: return "DuplicateFloor";
    case ViolationKind::kPoiUnknownFloor: return "PoiUnknownFloor";
    case ViolationKind::kPoiOutOfBounds: return "PoiOutOfBounds";
    case ViolationKind::kPoiOnBlockedCell: return "PoiOnBlockedCell";
    case ViolationKind::kDuplicatePoiName: return "DuplicatePoiName";
    case ViolationKind::kPortalUnknownFloor: return "PortalUnknownFloor";
    case ViolationKind::kPortalOutOfBounds: return "PortalOutOfBounds";
    case ViolationKind::kPortalOnBlockedCell: return "PortalOnBlockedCell";
    case ViolationKind::kPortalSameFloor: return "PortalSameFloor";
    case ViolationKind::kPortalBadCost: return "PortalBadCost";
    case ViolationKind::kPortalAmbiguous: return "PortalAmbiguous";
    case ViolationKind::kNoFloors: return "NoFloors";
  }
  return "Unknown";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Checks one portal endpoint, appending at most one violation.
void check_endpoint(const BuildingMap& map, const NodeRef& end,
                    const std::string& subject, std::vector<Violation>& out) {
  const Floor* floor = map.find_floor(end.floor);
  if (floor == nullptr) {
    out.push_back({ViolationKind::kPortalUnknownFloor, subject,
                   "endpoint references unknown floor " + std::to_string(end.floor)});
  } else if (!floor->grid.in_bounds(end.cell)) {
    out.push_back({ViolationKind::kPortalOutOfBounds, subject,
                   "endpoint " + to_string(end) + " is outside the grid"});
  } else if (!floor->grid.is_free(end.cell)) {
    out.push_back({ViolationKind::kPortalOnBlockedCell, subject,
                   "endpoint " + to_string(end) + " is a blocked cell"});
  }
}

}  // namespace

std::vector<Violation> validate_building(const BuildingMap& map) {
  std::vector<Violation> out;
  if (map.floors.empty()) {
    out.push_back({ViolationKind::kNoFloors, "map", "map has no floors"});
  }
  std::set<FloorId> seen_floors;
  for (const Floor& f : map.floors) {
    if (!seen_floors.insert(f.id).second) {
      out.push_back({ViolationKind::kDuplicateFloor, "floor " + std::to_string(f.id),
                     "floor id declared more than once"});
    }
  }

  std::set<std::string> seen_names;
  for (const Poi& p : map.pois) {
    const std::string subject = "poi '" + p.name + "'";
    if (!seen_names.insert(lower(p.name)).second) {
      out.push_back({ViolationKind::kDuplicatePoiName, subject,
                     "name is not unique (names compare case-insensitively)"});
    }
    const Floor* floor = map.find_floor(p.location.floor);
    if (floor == nullptr) {
      out.push_back({ViolationKind::kPoiUnknownFloor, subject,
                     "references unknown floor " + std::to_string(p.location.floor)});
    } else if (!floor->grid.in_bounds(p.location.cell)) {
      out.push_back({ViolationKind::kPoiOutOfBounds, subject,
                     "location " + to_string(p.location) + " is outside the grid"});
    } else if (!floor->grid.is_free(p.location.cell)) {
      out.push_back({ViolationKind::kPoiOnBlockedCell, subject,
                     "location " + to_string(p.location) + " is a blocked cell"});
    }
  }

  // Two portals of the same kind joining the same cell to the same floor
  // make a transit instruction ambiguous during replay.
  std::map<std::tuple<int, FloorId, int, int, FloorId>, std::size_t> transit_owner;
  for (std::size_t k = 0; k < map.portals.size(); ++k) {
    const Portal& portal = map.portals[k];
    const std::string subject = "portal #" + std::to_string(k);
    if (portal.a.floor == portal.b.floor) {
      out.push_back({ViolationKind::kPortalSameFloor, subject,
                     "both endpoints are on floor " + std::to_string(portal.a.floor)});
    }
    check_endpoint(map, portal.a, subject, out);
    check_endpoint(map, portal.b, subject, out);
    if (!(portal.cost >= 0.0) || !std::isfinite(portal.cost)) {
      out.push_back({ViolationKind::kPortalBadCost, subject,
                     "traversal cost must be a finite non-negative number"});
    }
    const int kind = static_cast<int>(portal.kind);
    for (const auto& [from, to] : {std::pair{portal.a, portal.b}, std::pair{portal.b, portal.a}}) {
      auto key = std::tuple{kind, from.floor, from.cell.i, from.cell.j, to.floor};
      auto [it, inserted] = transit_owner.emplace(key, k);
      if (!inserted && it->second != k) {
        out.push_back({ViolationKind::kPortalAmbiguous, subject,
                       "duplicates the " + std::string(to_string(portal.kind)) +
                           " at " + to_string(from) + " declared by portal #" +
                           std::to_string(it->second)});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Floor& require_floor(BuildingMap& map, FloorId id) {
  Floor* floor = map.find_floor(id);
  if (floor == nullptr) {
    throw Error(ErrorCode::kUnknownFloor, "unknown floor " + std::to_string(id));
  }
  return *floor;
}

void require_free(const BuildingMap& map, const NodeRef& node, const std::string& what) {
  const Floor* floor = map.find_floor(node.floor);
  if (floor == nullptr) {
    throw Error(ErrorCode::kUnknownFloor, what + " references unknown floor " +
                                              std::to_string(node.floor));
  }
  if (!floor->grid.in_bounds(node.cell)) {
    throw Error(ErrorCode::kOutOfBounds, what + " " + to_string(node) + " is outside the grid");
  }
  if (!floor->grid.is_free(node.cell)) {
    throw Error(ErrorCode::kNodeBlocked, what + " " + to_string(node) + " is a blocked cell");
  }
}

}  // namespace

BuildingMap set_cell(const BuildingMap& map, FloorId floor_id, CellCoord cell, bool free) {
  BuildingMap out = map;
  Floor& floor = require_floor(out, floor_id);
  if (!floor.grid.in_bounds(cell)) {
    throw Error(ErrorCode::kOutOfBounds, "cell " + to_string(cell) + " outside floor " +
                                             std::to_string(floor_id));
  }
  if (!free) {
    const NodeRef node{floor_id, cell};
    for (const Poi& p : map.pois) {
      if (p.location == node) {
        throw Error(ErrorCode::kWouldOrphanPoiOrPortal,
                    "cell " + to_string(node) + " hosts poi '" + p.name + "'");
      }
    }
    for (std::size_t k = 0; k < map.portals.size(); ++k) {
      if (map.portals[k].a == node || map.portals[k].b == node) {
        throw Error(ErrorCode::kWouldOrphanPoiOrPortal,
                    "cell " + to_string(node) + " hosts an endpoint of portal #" +
                        std::to_string(k));
      }
    }
  }
  floor.grid.set_free(cell, free);
  return out;
}

BuildingMap add_poi(const BuildingMap& map, Poi poi) {
  if (poi.name.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "poi name must not be empty");
  }
  if (map.find_poi(poi.name) != nullptr) {
    throw Error(ErrorCode::kDuplicatePoi, "poi '" + poi.name + "' already exists");
  }
  require_free(map, poi.location, "poi '" + poi.name + "'");
  BuildingMap out = map;
  out.pois.push_back(std::move(poi));
  return out;
}

BuildingMap remove_poi(const BuildingMap& map, std::string_view name) {
  BuildingMap out = map;
  auto it = std::find_if(out.pois.begin(), out.pois.end(),
                         [&](const Poi& p) { return iequals(p.name, name); });
  if (it == out.pois.end()) {
    throw Error(ErrorCode::kUnknownPoi, "no poi named '" + std::string(name) + "'");
  }
  out.pois.erase(it);
  return out;
}

BuildingMap add_portal(const BuildingMap& map, Portal portal) {
  if (portal.a.floor == portal.b.floor) {
    throw Error(ErrorCode::kInvalidArgument, "portal endpoints must be on different floors");
  }
  if (!(portal.cost >= 0.0) || !std::isfinite(portal.cost)) {
    throw Error(ErrorCode::kInvalidArgument, "portal cost must be finite and non-negative");
  }
  require_free(map, portal.a, "portal endpoint");
  require_free(map, portal.b, "portal endpoint");
  BuildingMap out = map;
  out.portals.push_back(portal);
  for (const Violation& v : validate_building(out)) {
    if (v.kind == ViolationKind::kPortalAmbiguous) {
      throw Error(ErrorCode::kInvalidArgument, v.message);
    }
  }
  return out;
}

BuildingMap remove_portal(const BuildingMap& map, std::size_t index) {
  if (index >= map.portals.size()) {
    throw Error(ErrorCode::kOutOfBounds, "no portal #" + std::to_string(index));
  }
  BuildingMap out = map;
  out.portals.erase(out.portals.begin() + static_cast<std::ptrdiff_t>(index));
  return out;
}

}  // namespace wayfind
