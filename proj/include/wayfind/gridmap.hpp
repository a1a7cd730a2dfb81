#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wayfind {

using FloorId = std::int32_t;

struct CellCoord {
  int i = 0;  // row
  int j = 0;  // column

  friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

struct NodeRef {
  FloorId floor = 0;
  CellCoord cell;

  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

std::string to_string(const CellCoord& cell);
std::string to_string(const NodeRef& node);

/// Walkability matrix of one floor. true = free (1), false = blocked (0).
class OccupancyGrid {
 public:
  /// All cells start free. Throws kInvalidArgument unless rows, cols >= 1.
  OccupancyGrid(int rows, int cols);

  /// Builds a grid from row strings of '0'/'1'. All rows must have equal
  /// non-zero length.
  static OccupancyGrid from_rows(std::span<const std::string> rows);
  std::vector<std::string> to_rows() const;

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return cells_.size(); }

  bool in_bounds(CellCoord c) const noexcept {
    return c.i >= 0 && c.i < rows_ && c.j >= 0 && c.j < cols_;
  }
  // Out-of-bounds cells read as blocked.
  bool is_free(CellCoord c) const noexcept {
    return in_bounds(c) && cells_[index(c)] != 0;
  }
  void set_free(CellCoord c, bool free);
  std::size_t free_count() const noexcept;

  std::size_t index(CellCoord c) const noexcept {
    return static_cast<std::size_t>(c.i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c.j);
  }
  std::span<const std::uint8_t> cells() const noexcept { return cells_; }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  int rows_;
  int cols_;
  std::vector<std::uint8_t> cells_;
};

struct Floor {
  FloorId id = 0;
  std::string label;
  OccupancyGrid grid{1, 1};
  std::optional<std::string> source_image;

  friend bool operator==(const Floor&, const Floor&) = default;
};

enum class PortalKind { kEscalator, kElevator, kStaircase };

std::string_view to_string(PortalKind kind);
std::optional<PortalKind> parse_portal_kind(std::string_view text);

/// Bidirectional link between cells on two different floors.
struct Portal {
  PortalKind kind = PortalKind::kEscalator;
  NodeRef a;
  NodeRef b;
  double cost = 1.0;  // grid-step units, same in both directions

  friend bool operator==(const Portal&, const Portal&) = default;
};

struct Poi {
  std::string name;
  NodeRef location;

  friend bool operator==(const Poi&, const Poi&) = default;
};

struct BuildingMap {
  std::string name;
  std::vector<Floor> floors;
  std::vector<Portal> portals;
  std::vector<Poi> pois;
  std::optional<double> meters_per_cell;

  const Floor* find_floor(FloorId id) const noexcept;
  Floor* find_floor(FloorId id) noexcept;
  // Case-insensitive exact match.
  const Poi* find_poi(std::string_view name) const noexcept;
  bool is_free(const NodeRef& node) const noexcept;

  friend bool operator==(const BuildingMap&, const BuildingMap&) = default;
};

bool iequals(std::string_view a, std::string_view b) noexcept;

// ---------------------------------------------------------------------------
// Mask binarization

/// 8-bit grayscale raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const noexcept {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

struct BinarizeOptions {
  // A cell is blocked iff its blocked-pixel fraction is strictly greater.
  double blocked_threshold = 0.5;
  // A pixel is blocked iff its luminance is below this value.
  int luminance_cutoff = 128;
};

/// Majority-vote downsampling of a mask to a rows x cols occupancy grid.
/// Blocks on the last row/column absorb the remainder pixels.
OccupancyGrid binarize_mask(const GrayImage& mask, int rows, int cols,
                            const BinarizeOptions& options = {});

/// Grid dimensions that keep the image aspect ratio with the larger side
/// equal to max_dimension. Returns {rows, cols}.
std::pair<int, int> suggest_dimensions(int image_width, int image_height,
                                       int max_dimension);

/// Reads a PNG (any bit depth, converted to 8-bit gray) or a binary/ASCII PGM.
GrayImage load_gray_image(const std::string& path);
/// Writes a binary PGM (P5).
void save_pgm(const GrayImage& image, const std::string& path);

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  kDuplicateFloor,
  kPoiUnknownFloor,
  kPoiOutOfBounds,
  kPoiOnBlockedCell,
  kDuplicatePoiName,
  kPortalUnknownFloor,
  kPortalOutOfBounds,
  kPortalOnBlockedCell,
  kPortalSameFloor,
  kPortalBadCost,
  kPortalAmbiguous,
  kNoFloors,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;  // "poi 'Gate A'", "portal #2", "floor 1"
  std::string message;
};

std::vector<Violation> validate_building(const BuildingMap& map);

// ---------------------------------------------------------------------------
// Editing. Each returns a new map and leaves the input untouched.

BuildingMap set_cell(const BuildingMap& map, FloorId floor, CellCoord cell,
                     bool free);
BuildingMap add_poi(const BuildingMap& map, Poi poi);
BuildingMap remove_poi(const BuildingMap& map, std::string_view name);
BuildingMap add_portal(const BuildingMap& map, Portal portal);
BuildingMap remove_portal(const BuildingMap& map, std::size_t index);

// ---------------------------------------------------------------------------
// Bundle persistence (see docs/bundle-format.md)

inline constexpr int kBundleSchemaVersion = 1;

enum class BundleCheck { kValidate, kSkipValidation };

std::string serialize_bundle(const BuildingMap& map);
/// Throws kParseError, kSchemaVersionMismatch or kValidationFailure.
BuildingMap parse_bundle(std::string_view text, BundleCheck check = BundleCheck::kValidate);

/// Writes to a sibling temporary file then renames it over `path`.
void save_bundle(const BuildingMap& map, const std::string& path);
BuildingMap load_bundle(const std::string& path, BundleCheck check = BundleCheck::kValidate);

}  // namespace wayfind
