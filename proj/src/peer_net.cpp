#include "ontomatch/peer_net.hpp"

#include "ontomatch/registry.hpp"

#include <atomic>
#include <chrono>
#include <future>
#include <mutex>
#include <regex>
#include <thread>

#include <httplib.h>

#include "http_util.hpp"
#include "json_util.hpp"

namespace ontomatch {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

json violations_to_json(const std::vector<Violation>& vs) {
  json arr = json::array();
  for (const auto& v : vs) arr.push_back({{"kind", to_string(v.kind)}, {"name", v.name}, {"message", v.message}});
  return arr;
}

}  // namespace

// ---------------------------------------------------------------------------
// Wire types

json match_request_to_json(const MatchRequest& r) {
  json j = {{"demand", demand_to_json(r.demand)}, {"request_id", r.request_id}};
  if (r.expected_fingerprint) j["expected_fingerprint"] = *r.expected_fingerprint;
  return j;
}

MatchRequest match_request_from_json(const json& j) {
  detail::check_keys(j, {"demand", "request_id", "expected_fingerprint"}, "match request");
  MatchRequest r;
  r.demand = demand_from_json(detail::required(j, "demand", "match request"));
  r.request_id = detail::required_string(j, "request_id", "match request");
  if (j.contains("expected_fingerprint")) r.expected_fingerprint = detail::required_string(j, "expected_fingerprint", "match request");
  return r;
}

json match_response_to_json(const MatchResponse& r) {
  json results = json::array();
  for (std::size_t i = 0; i < r.results.size(); ++i) {
    json e = raw_to_json(r.results[i]);
    if (i < r.snapshots.size()) e["instance"] = instance_to_json(r.snapshots[i]);
    results.push_back(std::move(e));
  }
  return {{"provider_id", r.provider_id},
          {"ontology_uri", r.ontology_uri},
          {"tbox_fingerprint", r.tbox_fingerprint},
          {"results", std::move(results)},
          {"matchmaking_ms", r.matchmaking_ms},
          {"request_id", r.request_id}};
}

MatchResponse match_response_from_json(const json& j) {
  detail::expect_object(j, "match response");
  MatchResponse r;
  r.provider_id = detail::required_string(j, "provider_id", "match response");
  r.ontology_uri = detail::required_string(j, "ontology_uri", "match response");
  r.tbox_fingerprint = detail::required_string(j, "tbox_fingerprint", "match response");
  r.request_id = detail::required_string(j, "request_id", "match response");
  r.matchmaking_ms = detail::required(j, "matchmaking_ms", "match response").get<double>();
  for (const auto& e : detail::required(j, "results", "match response")) {
    r.results.push_back(raw_from_json(e));
    if (auto it = e.find("instance"); it != e.end()) r.snapshots.push_back(instance_from_json(*it));
  }
  if (!r.snapshots.empty() && r.snapshots.size() != r.results.size())
    detail::malformed("match response", "instance snapshots missing for some results");
  return r;
}

json tbox_summary_to_json(const TBoxSummary& s) {
  return {{"provider_id", s.provider_id},
          {"fingerprint", s.fingerprint},
          {"ontology", ontology_to_json(OntologyDocument{s.schema, {}})}};
}

TBoxSummary tbox_summary_from_json(const json& j) {
  detail::check_keys(j, {"provider_id", "fingerprint", "ontology"}, "tbox");
  TBoxSummary s;
  s.provider_id = detail::required_string(j, "provider_id", "tbox");
  s.fingerprint = detail::required_string(j, "fingerprint", "tbox");
  s.schema = ontology_from_json(detail::required(j, "ontology", "tbox")).schema;
  return s;
}

json timing_to_json(const TimingBreakdown& t) {
  json per = json::array();
  for (const auto& p : t.per_provider)
    per.push_back({{"provider_id", p.provider_id},
                   {"address", p.address},
                   {"matchmaking_ms", p.matchmaking_ms},
                   {"latency_ms", p.latency_ms},
                   {"wall_ms", p.wall_ms},
                   {"clamped", p.clamped}});
  return {{"per_provider", std::move(per)}, {"merge_ms", t.merge_ms}, {"total_wall_ms", t.total_wall_ms}};
}

// ---------------------------------------------------------------------------
// Provider

struct ProviderNode::Impl {
  Impl(OntologyDocument doc, ProviderConfig cfg, std::shared_ptr<ProfileStore> store)
      : schema(std::move(doc.schema)),
        taxonomy(build_taxonomy(schema)),
        fingerprint(tbox_fingerprint(schema)),
        config(std::move(cfg)),
        profiles(store ? std::move(store) : std::make_shared<ProfileStore>()),
        supplies(std::make_shared<const std::vector<Instance>>(std::move(doc.instances))) {}

  std::shared_ptr<const std::vector<Instance>> snapshot() const {
    std::lock_guard lock(supplies_mutex);
    return supplies;
  }

  MatchResponse match(const MatchRequest& request) const {
    if (request.expected_fingerprint && *request.expected_fingerprint != fingerprint)
      throw FingerprintMismatch("provider '" + config.provider_id + "' serves TBox " + fingerprint);
    check_demand(schema, request.demand);
    const auto current = snapshot();

    MatchResponse r;
    const auto start = Clock::now();
    if (config.parallel_scoring) {
      r.results = score_supplies_parallel(taxonomy, request.demand, *current);
    } else {
      ComparisonCache cache;
      r.results = score_supplies(taxonomy, request.demand, *current, cache);
    }
    r.matchmaking_ms = elapsed_ms(start);

    r.snapshots = *current;
    r.provider_id = config.provider_id;
    r.ontology_uri = schema.uri;
    r.tbox_fingerprint = fingerprint;
    r.request_id = request.request_id;
    return r;
  }

  // Returns the status code and reply body.
  std::pair<int, json> publish(const Instance& instance) {
    if (auto v = validate_instance(schema, instance); !v.empty())
      return {400, {{"error", "invalid instance"}, {"violations", violations_to_json(v)}}};
    std::lock_guard publishing(publish_mutex);
    auto current = snapshot();
    for (const auto& s : *current)
      if (s.id == instance.id) return {409, {{"error", "instance '" + instance.id + "' already published"}}};
    auto next = std::make_shared<std::vector<Instance>>(*current);
    next->push_back(instance);
    {
      std::lock_guard lock(supplies_mutex);
      supplies = std::move(next);
    }
    const EventRecord event{EventKind::resource_published, instance.id, format_timestamp(now_utc())};
    const auto delivered = profiles->publish(event, instance, taxonomy, schema);
    return {201, {{"instance_id", instance.id}, {"deliveries", delivered.size()}}};
  }

  void install_routes() {
    auto& srv = server.http();
    srv.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      detail::reply(res, 200, {{"status", "ok"}, {"provider_id", config.provider_id}, {"supplies", snapshot()->size()}});
    });
    srv.Get("/tbox", [this](const httplib::Request&, httplib::Response& res) {
      detail::reply(res, 200, tbox_summary_to_json({schema, fingerprint, config.provider_id}));
    });
    srv.Post("/match", [this](const httplib::Request& req, httplib::Response& res) {
      MatchRequest request;
      try {
        request = match_request_from_json(json::parse(req.body));
      } catch (const std::exception& e) {
        return detail::reply(res, 400, {{"error", e.what()}});
      }
      if (config.bench_mode && req.has_header(kInjectDelayHeader)) {
        const int delay = std::stoi(req.get_header_value(kInjectDelayHeader));
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      }
      try {
        detail::reply(res, 200, match_response_to_json(match(request)));
      } catch (const DemandError& e) {
        detail::reply(res, 400, {{"error", e.what()}, {"violations", violations_to_json(e.violations())}});
      } catch (const FingerprintMismatch& e) {
        detail::reply(res, 409, {{"error", e.what()}});
      } catch (const std::exception& e) {
        detail::reply(res, 500, {{"error", e.what()}});
      }
    });
    srv.Post("/resources", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        auto [status, body] = publish(instance_from_json(json::parse(req.body)));
        detail::reply(res, status, body);
      } catch (const ValidationError& e) {
        detail::reply(res, 400, {{"error", e.what()}, {"violations", violations_to_json(e.violations())}});
      } catch (const std::exception& e) {
        detail::reply(res, 400, {{"error", e.what()}});
      }
    });
    srv.Post("/subscriptions", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const json body = json::parse(req.body);
        detail::check_keys(body, {"user_id", "demand", "valid_until", "query_id"}, "subscription");
        const std::string user = detail::required_string(body, "user_id", "subscription");
        SavedQuery q;
        q.demand = demand_from_json(detail::required(body, "demand", "subscription"));
        q.valid_until = detail::required_string(body, "valid_until", "subscription");
        q.query_id = body.contains("query_id") ? detail::required_string(body, "query_id", "subscription")
                                               : "sub-" + std::to_string(++subscription_counter);
        check_demand(schema, q.demand);
        profiles->save_query(user, q, now_utc());
        detail::reply(res, 201, {{"subscription_id", q.query_id}});
      } catch (const DemandError& e) {
        detail::reply(res, 400, {{"error", e.what()}, {"violations", violations_to_json(e.violations())}});
      } catch (const std::exception& e) {
        detail::reply(res, 400, {{"error", e.what()}});
      }
    });
    srv.Get(R"(/subscriptions/([^/]+)/inbox)", [this](const httplib::Request& req, httplib::Response& res) {
      json arr = json::array();
      for (const auto& e : profiles->inbox(req.matches[1].str())) arr.push_back(inbox_entry_to_json(e));
      detail::reply(res, 200, arr);
    });
  }

  OntologySchema schema;
  Taxonomy taxonomy;
  std::string fingerprint;
  ProviderConfig config;
  std::shared_ptr<ProfileStore> profiles;

  mutable std::mutex supplies_mutex;
  std::shared_ptr<const std::vector<Instance>> supplies;
  std::mutex publish_mutex;
  std::atomic<std::uint64_t> subscription_counter{0};
  detail::BackgroundServer server;
};

ProviderNode::ProviderNode(OntologyDocument ontology, ProviderConfig config, std::shared_ptr<ProfileStore> profiles)
    : impl_(std::make_unique<Impl>(std::move(ontology), std::move(config), std::move(profiles))) {
  impl_->install_routes();
}

ProviderNode::~ProviderNode() { stop(); }

int ProviderNode::start(const std::string& host, int port) { return impl_->server.start(host, port); }
void ProviderNode::listen_blocking(const std::string& host, int port) { impl_->server.listen_blocking(host, port); }
void ProviderNode::stop() { impl_->server.stop(); }

const std::string& ProviderNode::provider_id() const { return impl_->config.provider_id; }
const std::string& ProviderNode::fingerprint() const { return impl_->fingerprint; }
const OntologySchema& ProviderNode::schema() const { return impl_->schema; }
std::size_t ProviderNode::supply_count() const { return impl_->snapshot()->size(); }
ProfileStore& ProviderNode::profiles() { return *impl_->profiles; }

MatchResponse ProviderNode::handle_match(const MatchRequest& request) const { return impl_->match(request); }

// ---------------------------------------------------------------------------
// Client

ProviderClient::ProviderClient(std::string address, int timeout_ms)
    : address_(std::move(address)), base_url_(http_base_url(address_)), timeout_ms_(timeout_ms) {}

TBoxSummary ProviderClient::fetch_tbox() const {
  auto cli = detail::make_client(base_url_, timeout_ms_);
  auto res = cli.Get("/tbox");
  detail::expect_status(res, address_, {200});
  try {
    return tbox_summary_from_json(detail::parse_body(*res));
  } catch (const ValidationError& e) {
    throw ProtocolError(res->status, address_ + ": malformed /tbox reply: " + e.what());
  }
}

MatchResponse ProviderClient::match(const MatchRequest& request, std::optional<int> inject_delay_ms) const {
  auto cli = detail::make_client(base_url_, timeout_ms_);
  httplib::Headers headers;
  if (inject_delay_ms) headers.emplace(kInjectDelayHeader, std::to_string(*inject_delay_ms));
  auto res = cli.Post("/match", headers, match_request_to_json(request).dump(), "application/json");
  detail::expect_status(res, address_, {200});
  try {
    return match_response_from_json(detail::parse_body(*res));
  } catch (const ValidationError& e) {
    throw ProtocolError(res->status, address_ + ": malformed /match reply: " + e.what());
  }
}

std::size_t ProviderClient::publish(const Instance& instance) const {
  auto cli = detail::make_client(base_url_, timeout_ms_);
  auto res = cli.Post("/resources", instance_to_json(instance).dump(), "application/json");
  detail::expect_status(res, address_, {201});
  return detail::parse_body(*res).at("deliveries").get<std::size_t>();
}

std::string ProviderClient::subscribe(const std::string& user_id, const Demand& demand, const std::string& valid_until,
                                      const std::string& query_id) const {
  auto cli = detail::make_client(base_url_, timeout_ms_);
  json body = {{"user_id", user_id}, {"demand", demand_to_json(demand)}, {"valid_until", valid_until}};
  if (!query_id.empty()) body["query_id"] = query_id;
  auto res = cli.Post("/subscriptions", body.dump(), "application/json");
  detail::expect_status(res, address_, {201});
  return detail::parse_body(*res).at("subscription_id").get<std::string>();
}

std::vector<InboxEntry> ProviderClient::poll_inbox(const std::string& user_id) const {
  auto cli = detail::make_client(base_url_, timeout_ms_);
  auto res = cli.Get("/subscriptions/" + detail::url_encode(user_id) + "/inbox");
  detail::expect_status(res, address_, {200});
  std::vector<InboxEntry> out;
  for (const auto& e : detail::parse_body(*res)) out.push_back(inbox_entry_from_json(e));
  return out;
}

bool ProviderClient::healthy() const {
  auto cli = detail::make_client(base_url_, timeout_ms_);
  auto res = cli.Get("/health");
  return res && res->status == 200;
}

// ---------------------------------------------------------------------------
// Fan-out

std::optional<FanoutMode> fanout_mode_from_string(std::string_view s) {
  if (s == "sync") return FanoutMode::sync;
  if (s == "async") return FanoutMode::async;
  return std::nullopt;
}

namespace {

struct Attempt {
  std::string address;
  std::optional<MatchResponse> response;
  std::string error;
  double wall_ms = 0;
};

Attempt attempt(const FanoutPlan& plan, const std::string& address, const MatchRequest& request) {
  Attempt a{address, std::nullopt, {}, 0};
  std::optional<int> delay;
  if (auto it = plan.inject_delay_ms.find(address); it != plan.inject_delay_ms.end()) delay = it->second;
  const auto start = Clock::now();
  try {
    a.response = ProviderClient(address, plan.per_request_timeout_ms).match(request, delay);
  } catch (const std::exception& e) {
    a.error = e.what();
  }
  a.wall_ms = elapsed_ms(start);
  return a;
}

}  // namespace

FanoutResult fanout(const FanoutPlan& plan, const Demand& demand) {
  if (plan.providers.empty()) throw FanoutError(FanoutError::Kind::invalid_plan, "fan-out plan lists no providers");
  if (plan.per_request_timeout_ms <= 0) throw FanoutError(FanoutError::Kind::invalid_plan, "per-request timeout must be positive");

  FanoutResult out;
  // Same-TBox check before any demand leaves the client.
  std::vector<std::string> targets;
  std::string fingerprint;
  std::string first_address;
  for (const auto& address : plan.providers) {
    std::string fp;
    if (auto it = plan.known_fingerprints.find(address); it != plan.known_fingerprints.end()) {
      fp = it->second;
    } else {
      try {
        fp = ProviderClient(address, plan.per_request_timeout_ms).fetch_tbox().fingerprint;
      } catch (const std::exception& e) {
        out.failures.push_back({address, e.what()});
        continue;
      }
    }
    if (fingerprint.empty()) {
      fingerprint = fp;
      first_address = address;
    } else if (fp != fingerprint) {
      throw FanoutError(FanoutError::Kind::tbox_mismatch, "provider " + address + " serves a different TBox than " + first_address);
    }
    targets.push_back(address);
  }

  static std::atomic<std::uint64_t> request_counter{0};
  const MatchRequest request{demand, "fanout-" + std::to_string(++request_counter), fingerprint};

  std::vector<Attempt> attempts;
  const auto start = Clock::now();
  if (plan.mode == FanoutMode::sync) {
    for (const auto& address : targets) attempts.push_back(attempt(plan, address, request));
  } else {
    std::vector<std::future<Attempt>> pending;
    for (const auto& address : targets)
      pending.push_back(std::async(std::launch::async, [&plan, address, &request] { return attempt(plan, address, request); }));
    for (auto& f : pending) attempts.push_back(f.get());
  }

  std::vector<ProviderResults> responses;
  for (auto& a : attempts) {
    if (!a.response) {
      out.failures.push_back({a.address, a.error});
      continue;
    }
    MatchResponse& r = *a.response;
    ProviderTiming t{r.provider_id, a.address, r.matchmaking_ms, a.wall_ms - r.matchmaking_ms, a.wall_ms, false};
    if (t.latency_ms < 0) {
      t.latency_ms = 0;
      t.clamped = true;
    }
    out.timing.per_provider.push_back(t);
    ProvenanceTag tag{r.provider_id, r.ontology_uri};
    out.provider_order.push_back(tag);
    responses.push_back({tag, r.tbox_fingerprint, std::move(r.results), std::move(r.snapshots)});
  }
  if (responses.empty()) {
    std::string msg = "all providers failed:";
    for (const auto& f : out.failures) msg += " [" + f.error + "]";
    throw FanoutError(FanoutError::Kind::all_failed, msg);
  }

  const auto merge_start = Clock::now();
  out.merged = merge_multi_provider(responses);
  out.timing.merge_ms = elapsed_ms(merge_start);
  out.timing.total_wall_ms = elapsed_ms(start);
  return out;
}

}  // namespace ontomatch
