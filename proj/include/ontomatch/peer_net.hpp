#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ontomatch/matchmaker.hpp"
#include "ontomatch/net_errors.hpp"
#include "ontomatch/ontology.hpp"
#include "ontomatch/presentation.hpp"
#include "ontomatch/profile.hpp"
#include "ontomatch/taxonomy.hpp"

namespace ontomatch {

/// Header carrying an artificial server-side delay (honored in bench mode only).
inline constexpr const char* kInjectDelayHeader = "X-Inject-Delay-Ms";

struct MatchRequest {
  Demand demand;
  std::string request_id;
  std::optional<std::string> expected_fingerprint;  // set by fan-out
};

struct MatchResponse {
  std::string provider_id;
  std::string ontology_uri;
  std::string tbox_fingerprint;
  std::vector<RawMatch> results;
  std::vector<Instance> snapshots;  // parallel to results
  double matchmaking_ms = 0;
  std::string request_id;
};

json match_request_to_json(const MatchRequest& r);
MatchRequest match_request_from_json(const json& j);
json match_response_to_json(const MatchResponse& r);
MatchResponse match_response_from_json(const json& j);

struct ProviderConfig {
  std::string provider_id = "provider";
  bool bench_mode = false;
  bool parallel_scoring = true;
};

/// A provider peer: its ontology, its supplies, and its profile store,
/// served over HTTP. Matching runs against an immutable supply snapshot;
/// publications swap in a new snapshot.
class ProviderNode {
 public:
  ProviderNode(OntologyDocument ontology, ProviderConfig config, std::shared_ptr<ProfileStore> profiles = nullptr);
  ~ProviderNode();
  ProviderNode(const ProviderNode&) = delete;
  ProviderNode& operator=(const ProviderNode&) = delete;

  int start(const std::string& host, int port);  // returns bound port
  void listen_blocking(const std::string& host, int port);
  void stop();

  const std::string& provider_id() const;
  const std::string& fingerprint() const;
  const OntologySchema& schema() const;
  std::size_t supply_count() const;
  ProfileStore& profiles();

  /// Same path the HTTP handlers use; exposed for in-process callers.
  MatchResponse handle_match(const MatchRequest& request) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Class and property listing of a provider's TBox.
struct TBoxSummary {
  OntologySchema schema;
  std::string fingerprint;
  std::string provider_id;
};

json tbox_summary_to_json(const TBoxSummary& s);
TBoxSummary tbox_summary_from_json(const json& j);

class ProviderClient {
 public:
  explicit ProviderClient(std::string address, int timeout_ms = 5000);

  const std::string& address() const { return address_; }

  TBoxSummary fetch_tbox() const;
  MatchResponse match(const MatchRequest& request, std::optional<int> inject_delay_ms = std::nullopt) const;
  /// Returns the number of inbox deliveries the publication triggered.
  std::size_t publish(const Instance& instance) const;
  std::string subscribe(const std::string& user_id, const Demand& demand, const std::string& valid_until,
                        const std::string& query_id = {}) const;
  std::vector<InboxEntry> poll_inbox(const std::string& user_id) const;
  bool healthy() const;

 private:
  std::string address_;
  std::string base_url_;
  int timeout_ms_;
};

enum class FanoutMode { sync, async };
std::optional<FanoutMode> fanout_mode_from_string(std::string_view s);

struct FanoutPlan {
  std::vector<std::string> providers;  // host:port
  FanoutMode mode = FanoutMode::async;
  int per_request_timeout_ms = 5000;
  /// Fingerprints already known (e.g. from the registry), keyed by address;
  /// missing ones are fetched from /tbox before any match is sent.
  std::map<std::string, std::string> known_fingerprints;
  /// Bench-mode delay requested from each provider, keyed by address.
  std::map<std::string, int> inject_delay_ms;
};

struct ProviderTiming {
  std::string provider_id;
  std::string address;
  double matchmaking_ms = 0;
  double latency_ms = 0;
  double wall_ms = 0;
  bool clamped = false;  // wall < matchmaking (clock skew); latency forced to 0
};

struct TimingBreakdown {
  std::vector<ProviderTiming> per_provider;
  double merge_ms = 0;
  double total_wall_ms = 0;
};

struct ProviderFailure {
  std::string address;
  std::string error;
};

struct FanoutResult {
  std::vector<ResultEntry> merged;
  TimingBreakdown timing;
  std::vector<ProviderFailure> failures;
  std::vector<ProvenanceTag> provider_order;  // plan order of responding providers
};

/// A request tagged with an expected fingerprint reached a provider serving another TBox.
class FingerprintMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FanoutError : public std::runtime_error {
 public:
  enum class Kind { invalid_plan, tbox_mismatch, all_failed };
  FanoutError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Sends `demand` to every provider of the plan (one after another in sync
/// mode, all at once in async mode) and merges the raw counters. Refuses to
/// send anything when the providers' fingerprints differ; a failing
/// provider is reported in `failures`; throws when every provider failed.
FanoutResult fanout(const FanoutPlan& plan, const Demand& demand);

json timing_to_json(const TimingBreakdown& t);

}  // namespace ontomatch
