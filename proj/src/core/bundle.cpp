// Bundle (de)serialization. The layout is documented in docs/bundle-format.md;
// keys are emitted in a fixed order so bundles diff cleanly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <string>

#include "wayfind/error.hpp"
#include "wayfind/gridmap.hpp"

namespace wayfind {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kFormatTag = "wayfind-bundle";

ordered_json node_to_json(const NodeRef& n) {
  ordered_json j;
  j["floor"] = n.floor;
  j["i"] = n.cell.i;
  j["j"] = n.cell.j;
  return j;
}

NodeRef node_from_json(const ordered_json& j) {
  return NodeRef{j.at("floor").get<FloorId>(), {j.at("i").get<int>(), j.at("j").get<int>()}};
}

std::string summarize(const std::vector<Violation>& violations) {
  std::string msg = "bundle violates " + std::to_string(violations.size()) + " invariant(s):";
  for (const Violation& v : violations) msg += " [" + v.subject + ": " + v.message + "]";
  return msg;
}

}  // namespace

std::string serialize_bundle(const BuildingMap& map) {
  ordered_json doc;
  doc["format"] = kFormatTag;
  doc["version"] = kBundleSchemaVersion;
  doc["name"] = map.name;
  doc["meters_per_cell"] = map.meters_per_cell ? ordered_json(*map.meters_per_cell) : ordered_json();

  ordered_json floors = ordered_json::array();
  for (const Floor& f : map.floors) {
    ordered_json jf;
    jf["id"] = f.id;
    jf["label"] = f.label;
    jf["rows"] = f.grid.rows();
    jf["cols"] = f.grid.cols();
    jf["source_image"] = f.source_image ? ordered_json(*f.source_image) : ordered_json();
    jf["cells"] = f.grid.to_rows();
    floors.push_back(std::move(jf));
  }
  doc["floors"] = std::move(floors);

  ordered_json portals = ordered_json::array();
  for (const Portal& p : map.portals) {
    ordered_json jp;
    jp["kind"] = std::string(to_string(p.kind));
    jp["a"] = node_to_json(p.a);
    jp["b"] = node_to_json(p.b);
    jp["cost"] = p.cost;
    portals.push_back(std::move(jp));
  }
  doc["portals"] = std::move(portals);

  ordered_json pois = ordered_json::array();
  for (const Poi& p : map.pois) {
    ordered_json jp;
    jp["name"] = p.name;
    jp["at"] = node_to_json(p.location);
    pois.push_back(std::move(jp));
  }
  doc["pois"] = std::move(pois);
  return doc.dump(2) + "\n";
}

BuildingMap parse_bundle(std::string_view text, BundleCheck check) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("bundle is not well-formed: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormatTag) {
    throw Error(ErrorCode::kSchemaVersionMismatch, "document is not a wayfind bundle");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kBundleSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "unsupported bundle version " + (doc.contains("version") ? doc["version"].dump() : "<missing>") +
                    ", expected " + std::to_string(kBundleSchemaVersion));
  }

  BuildingMap map;
  try {
    map.name = doc.at("name").get<std::string>();
    if (const auto& m = doc.at("meters_per_cell"); !m.is_null()) map.meters_per_cell = m.get<double>();
    for (const auto& jf : doc.at("floors")) {
      Floor f;
      f.id = jf.at("id").get<FloorId>();
      f.label = jf.at("label").get<std::string>();
      if (const auto& img = jf.at("source_image"); !img.is_null()) f.source_image = img.get<std::string>();
      const auto rows = jf.at("cells").get<std::vector<std::string>>();
      f.grid = OccupancyGrid::from_rows(rows);
      if (f.grid.rows() != jf.at("rows").get<int>() || f.grid.cols() != jf.at("cols").get<int>()) {
        throw Error(ErrorCode::kParseError, "floor " + std::to_string(f.id) +
                                                ": declared size does not match cells");
      }
      map.floors.push_back(std::move(f));
    }
    for (const auto& jp : doc.at("portals")) {
      Portal p;
      const auto kind_text = jp.at("kind").get<std::string>();
      const auto kind = parse_portal_kind(kind_text);
      if (!kind) throw Error(ErrorCode::kParseError, "unknown portal kind '" + kind_text + "'");
      p.kind = *kind;
      p.a = node_from_json(jp.at("a"));
      p.b = node_from_json(jp.at("b"));
      p.cost = jp.at("cost").get<double>();
      map.portals.push_back(p);
    }
    for (const auto& jp : doc.at("pois")) {
      map.pois.push_back(Poi{jp.at("name").get<std::string>(), node_from_json(jp.at("at"))});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bundle field error: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) throw Error(ErrorCode::kParseError, e.what());
    throw;
  }

  if (check == BundleCheck::kValidate) {
    if (auto violations = validate_building(map); !violations.empty()) {
      throw Error(ErrorCode::kValidationFailure, summarize(violations));
    }
  }
  return map;
}

void save_bundle(const BuildingMap& map, const std::string& path) {
  if (auto violations = validate_building(map); !violations.empty()) {
    throw Error(ErrorCode::kValidationFailure, summarize(violations));
  }
  const std::string text = serialize_bundle(map);
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write '" + tmp.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIoFailure, "cannot replace '" + path + "'");
  }
}

BuildingMap load_bundle(const std::string& path, BundleCheck check) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path + "'");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_bundle(text, check);
}

}  // namespace wayfind
