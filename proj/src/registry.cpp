#include "ontomatch/registry.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "ontomatch/ontology.hpp"
#include "ontomatch/timestamp.hpp"

#include "fs_util.hpp"
#include "http_util.hpp"
#include "json_util.hpp"

namespace ontomatch {

bool valid_provider_address(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == address.size()) return false;
  const auto host = address.substr(0, colon);
  if (host.find_first_of(" /\t") != std::string_view::npos) return false;
  const auto port = address.substr(colon + 1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  return ec == std::errc{} && ptr == port.data() + port.size() && value > 0 && value <= 65535;
}

std::vector<std::string> validate_entry(const RegistryEntry& e) {
  std::vector<std::string> out;
  if (e.ontology_uri.empty()) out.push_back("ontology_uri must not be empty");
  if (e.keywords.empty()) out.push_back("keywords must not be empty");
  for (const auto& k : e.keywords)
    if (k.empty()) out.push_back("keywords must not contain empty strings");
  if (e.tbox_fingerprint.empty()) out.push_back("tbox_fingerprint must not be empty");
  if (!valid_provider_address(e.provider_address))
    out.push_back("provider_address '" + e.provider_address + "' is not host:port");
  return out;
}

json registry_entry_to_json(const RegistryEntry& e) {
  return {{"ontology_uri", e.ontology_uri},
          {"keywords", e.keywords},
          {"tbox_fingerprint", e.tbox_fingerprint},
          {"provider_address", e.provider_address},
          {"registered_at", e.registered_at}};
}

RegistryEntry registry_entry_from_json(const json& j, bool require_timestamp) {
  detail::check_keys(j, {"ontology_uri", "keywords", "tbox_fingerprint", "provider_address", "registered_at"},
                     "registry entry");
  RegistryEntry e;
  e.ontology_uri = detail::required_string(j, "ontology_uri", "registry entry");
  detail::string_array(j, "keywords", e.ontology_uri, [&](std::string k) { e.keywords.insert(lowercase(k)); });
  e.tbox_fingerprint = detail::required_string(j, "tbox_fingerprint", e.ontology_uri);
  e.provider_address = detail::required_string(j, "provider_address", e.ontology_uri);
  if (require_timestamp || j.contains("registered_at"))
    e.registered_at = detail::required_string(j, "registered_at", e.ontology_uri);
  return e;
}

std::string registry_clock_now() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto secs = floor<seconds>(now);
  const auto micros = duration_cast<microseconds>(now - secs).count();
  std::string base = format_timestamp(secs);  // ...SSZ
  char frac[32];
  std::snprintf(frac, sizeof frac, ".%06lldZ", static_cast<long long>(micros));
  base.pop_back();
  return base + frac;
}

// ---------------------------------------------------------------------------
// Registry

Registry::Registry(std::optional<std::filesystem::path> snapshot, Clock clock)
    : snapshot_(std::move(snapshot)), clock_(clock ? std::move(clock) : Clock(registry_clock_now)) {
  if (!snapshot_ || !std::filesystem::exists(*snapshot_)) return;
  const json doc = json::parse(detail::read_file(*snapshot_));
  detail::check_keys(doc, {"entries"}, "registry snapshot");
  for (const auto& ej : detail::required(doc, "entries", "registry snapshot")) {
    RegistryEntry e = registry_entry_from_json(ej);
    entries_[e.ontology_uri] = std::move(e);
  }
}

RegistryEntry Registry::register_entry(RegistryEntry e) {
  std::set<std::string> lowered;
  for (const auto& k : e.keywords) lowered.insert(lowercase(k));
  e.keywords = std::move(lowered);
  if (auto problems = validate_entry(e); !problems.empty()) {
    std::string msg = "malformed registry entry:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw std::invalid_argument(msg);
  }
  std::unique_lock lock(mutex_);
  e.registered_at = clock_();
  entries_[e.ontology_uri] = e;
  persist_locked();
  return e;
}

DeregisterResult Registry::deregister(const std::string& uri) {
  std::unique_lock lock(mutex_);
  if (entries_.erase(uri) == 0) return DeregisterResult::not_found;
  persist_locked();
  return DeregisterResult::removed;
}

namespace {

void order_entries(std::vector<RegistryEntry>& v) {
  std::sort(v.begin(), v.end(), [](const RegistryEntry& a, const RegistryEntry& b) {
    if (a.registered_at != b.registered_at) return a.registered_at < b.registered_at;
    return a.ontology_uri < b.ontology_uri;
  });
}

}  // namespace

std::vector<RegistryEntry> Registry::search_by_keyword(const std::set<std::string>& keywords) const {
  std::set<std::string> wanted;
  for (const auto& k : keywords) wanted.insert(lowercase(k));
  std::shared_lock lock(mutex_);
  std::vector<RegistryEntry> out;
  for (const auto& [_, e] : entries_) {
    const bool hit = wanted.empty() || std::any_of(e.keywords.begin(), e.keywords.end(),
                                                   [&](const std::string& k) { return wanted.count(k) > 0; });
    if (hit) out.push_back(e);
  }
  order_entries(out);
  return out;
}

std::vector<RegistryEntry> Registry::list_all() const { return search_by_keyword({}); }

void Registry::save(const std::filesystem::path& path) const {
  json entries = json::array();
  for (const auto& e : list_all()) entries.push_back(registry_entry_to_json(e));
  detail::write_file_atomic(path, json{{"entries", std::move(entries)}}.dump(2));
}

void Registry::persist_locked() const {
  if (!snapshot_) return;
  json entries = json::array();
  for (const auto& [_, e] : entries_) entries.push_back(registry_entry_to_json(e));
  detail::write_file_atomic(*snapshot_, json{{"entries", std::move(entries)}}.dump(2));
}

// ---------------------------------------------------------------------------
// HTTP

struct RegistryServer::Impl {
  explicit Impl(Registry& r) : registry(r) {}
  Registry& registry;
  detail::BackgroundServer server;
};

RegistryServer::RegistryServer(Registry& registry) : impl_(std::make_unique<Impl>(registry)) {
  auto& srv = impl_->server.http();
  Registry& reg = impl_->registry;

  srv.Post("/ontologies", [&reg](const httplib::Request& req, httplib::Response& res) {
    try {
      RegistryEntry stored = reg.register_entry(registry_entry_from_json(json::parse(req.body), false));
      detail::reply(res, 201, registry_entry_to_json(stored));
    } catch (const std::exception& e) {
      detail::reply(res, 400, {{"error", e.what()}});
    }
  });
  srv.Delete("/ontologies", [&reg](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("uri")) return detail::reply(res, 400, {{"error", "missing uri parameter"}});
    const auto outcome = reg.deregister(req.get_param_value("uri"));
    if (outcome == DeregisterResult::removed) {
      detail::reply(res, 200, {{"status", "removed"}});
    } else {
      detail::reply(res, 404, {{"status", "not_found"}});
    }
  });
  srv.Get("/ontologies", [&reg](const httplib::Request& req, httplib::Response& res) {
    std::set<std::string> keywords;
    for (std::size_t i = 0; i < req.get_param_value_count("keyword"); ++i)
      keywords.insert(req.get_param_value("keyword", i));
    json arr = json::array();
    for (const auto& e : reg.search_by_keyword(keywords)) arr.push_back(registry_entry_to_json(e));
    detail::reply(res, 200, arr);
  });
  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) { detail::reply(res, 200, {{"status", "ok"}}); });
}

RegistryServer::~RegistryServer() { stop(); }

int RegistryServer::start(const std::string& host, int port) { return impl_->server.start(host, port); }
void RegistryServer::listen_blocking(const std::string& host, int port) { impl_->server.listen_blocking(host, port); }
void RegistryServer::stop() { impl_->server.stop(); }

std::string http_base_url(std::string_view address) {
  if (address.starts_with("http://")) return std::string(address);
  return "http://" + std::string(address);
}

RegistryClient::RegistryClient(std::string base_url, int timeout_ms)
    : base_url_(http_base_url(base_url)), timeout_ms_(timeout_ms) {}

void RegistryClient::register_entry(const RegistryEntry& e) const {
  auto cli = detail::make_client(base_url_, timeout_ms_);
  json body = registry_entry_to_json(e);
  body.erase("registered_at");
  auto res = cli.Post("/ontologies", body.dump(), "application/json");
  detail::expect_status(res, base_url_, {201});
}

DeregisterResult RegistryClient::deregister(const std::string& uri) const {
  auto cli = detail::make_client(base_url_, timeout_ms_);
  auto res = cli.Delete("/ontologies?uri=" + detail::url_encode(uri));
  const int status = detail::expect_status(res, base_url_, {200, 404});
  return status == 200 ? DeregisterResult::removed : DeregisterResult::not_found;
}

std::vector<RegistryEntry> RegistryClient::search(const std::set<std::string>& keywords) const {
  auto cli = detail::make_client(base_url_, timeout_ms_);
  std::string path = "/ontologies";
  char sep = '?';
  for (const auto& k : keywords) {
    path += sep;
    path += "keyword=" + detail::url_encode(k);
    sep = '&';
  }
  auto res = cli.Get(path);
  detail::expect_status(res, base_url_, {200});
  std::vector<RegistryEntry> out;
  for (const auto& ej : detail::parse_body(*res)) out.push_back(registry_entry_from_json(ej));
  return out;
}

}  // namespace ontomatch
