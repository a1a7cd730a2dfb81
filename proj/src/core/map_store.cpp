#include <algorithm>

#include "wayfind/error.hpp"
#include "wayfind/service.hpp"

namespace wayfind {

MapStore::MapStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) {
    throw Error(ErrorCode::kIoFailure, "'" + dir_.string() + "' is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& de : std::filesystem::directory_iterator(dir_)) {
    if (de.is_regular_file() && de.path().extension() == ".json") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    auto e = std::make_unique<Entry>();
    e->file = file;
    e->current.map = std::make_shared<const BuildingMap>(load_bundle(file.string()));
    e->current.revision = 1;
    entries_.emplace(file.stem().string(), std::move(e));
  }
}

std::vector<std::string> MapStore::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, e] : entries_) out.push_back(id);
  return out;
}

MapStore::Entry& MapStore::entry(const std::string& id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) throw Error(ErrorCode::kUnknownMap, "no map with id '" + id + "'");
  return *it->second;
}

MapStore::Snapshot MapStore::get(const std::string& id) const {
  Entry& e = entry(id);
  std::lock_guard lock(e.snapshot_mu);
  return e.current;
}

MapStore::Snapshot MapStore::update(const std::string& id,
                                    const std::function<BuildingMap(const BuildingMap&)>& edit) {
  Entry& e = entry(id);
  std::lock_guard writer(e.write_mu);
  const Snapshot base = get(id);
  auto next = std::make_shared<const BuildingMap>(edit(*base.map));
  save_bundle(*next, e.file.string());  // validates; atomic rename
  Snapshot published{std::move(next), base.revision + 1};
  {
    std::lock_guard lock(e.snapshot_mu);
    e.current = published;
  }
  return published;
}

}  // namespace wayfind
