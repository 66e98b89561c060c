#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ontomatch/net_errors.hpp"
#include "ontomatch/value.hpp"

namespace ontomatch {

struct RegistryEntry {
  std::string ontology_uri;
  std::set<std::string> keywords;  // lowercase
  std::string tbox_fingerprint;
  std::string provider_address;  // host:port
  std::string registered_at;     // ISO-8601, microsecond precision

  bool operator==(const RegistryEntry&) const = default;
};

enum class DeregisterResult { removed, not_found };

bool valid_provider_address(std::string_view address);

/// Empty when the entry is well-formed; otherwise one message per problem.
std::vector<std::string> validate_entry(const RegistryEntry& e);

json registry_entry_to_json(const RegistryEntry& e);
RegistryEntry registry_entry_from_json(const json& j, bool require_timestamp = true);

/// Ontology registry keyed by URI. Mutations are serialized and, when a
/// snapshot path is set, persisted after each one (temp file + rename).
class Registry {
 public:
  using Clock = std::function<std::string()>;

  /// Loads `snapshot` when the file exists.
  explicit Registry(std::optional<std::filesystem::path> snapshot = std::nullopt, Clock clock = {});

  /// Stores `e` stamped with the current time; re-registering a URI replaces
  /// the previous entry. Throws std::invalid_argument on a malformed entry.
  RegistryEntry register_entry(RegistryEntry e);
  DeregisterResult deregister(const std::string& uri);

  /// Entries sharing at least one keyword (case-insensitive), ordered by
  /// registration time then URI. An empty query returns everything.
  std::vector<RegistryEntry> search_by_keyword(const std::set<std::string>& keywords) const;
  std::vector<RegistryEntry> list_all() const;

  void save(const std::filesystem::path& path) const;

 private:
  void persist_locked() const;

  std::optional<std::filesystem::path> snapshot_;
  Clock clock_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, RegistryEntry> entries_;
};

std::string registry_clock_now();

/// HTTP front end: POST/GET/DELETE /ontologies.
class RegistryServer {
 public:
  explicit RegistryServer(Registry& registry);
  ~RegistryServer();
  RegistryServer(const RegistryServer&) = delete;
  RegistryServer& operator=(const RegistryServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  int start(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void listen_blocking(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class RegistryClient {
 public:
  explicit RegistryClient(std::string base_url, int timeout_ms = 2000);

  void register_entry(const RegistryEntry& e) const;  // throws on non-201
  DeregisterResult deregister(const std::string& uri) const;
  std::vector<RegistryEntry> search(const std::set<std::string>& keywords) const;

 private:
  std::string base_url_;
  int timeout_ms_;
};

/// Accepts "host:port" or "http://host:port" and returns the latter.
std::string http_base_url(std::string_view address);

}  // namespace ontomatch
