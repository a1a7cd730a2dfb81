#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "wayfind/error.hpp"
#include "wayfind/gridmap.hpp"
#include "wayfind/narrator.hpp"
#include "wayfind/route.hpp"

namespace wayfind {

/// Bundles of one directory, keyed by file stem. Readers take immutable
/// snapshots; writers are serialized per map and persist before publishing.
class MapStore {
 public:
  struct Snapshot {
    std::shared_ptr<const BuildingMap> map;
    std::uint64_t revision = 0;
  };

  /// Loads every *.json bundle in `dir`. Throws on the first invalid one.
  explicit MapStore(std::filesystem::path dir);

  std::vector<std::string> ids() const;
  Snapshot get(const std::string& id) const;  // throws kUnknownMap

  /// Applies `edit` to the current map, validates and saves the result, then
  /// publishes it. Nothing changes if any step throws.
  Snapshot update(const std::string& id,
                  const std::function<BuildingMap(const BuildingMap&)>& edit);

 private:
  struct Entry {
    std::filesystem::path file;
    std::mutex write_mu;
    mutable std::mutex snapshot_mu;
    Snapshot current;
  };

  Entry& entry(const std::string& id) const;

  std::filesystem::path dir_;
  std::map<std::string, std::unique_ptr<Entry>> entries_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  NarrateOptions narration;
  int max_inflight_lm = 2;
};

/// JSON-over-HTTP protocol, see docs/service-protocol.md.
class Server {
 public:
  Server(MapStore& store, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the listening socket and returns the port. Throws kIoFailure.
  int bind();
  /// Serves until stop(). Calls bind() first if needed.
  void run();
  void stop();
  bool running() const;
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP status used for each error code on the service protocol.
int http_status_for(ErrorCode code);

}  // namespace wayfind
