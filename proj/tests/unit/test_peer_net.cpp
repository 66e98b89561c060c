#include <doctest.h>

#include <memory>
#include <random>

#include <httplib.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ontomatch/peer_net.hpp"

using namespace ontomatch;

namespace {

struct Peer {
  std::unique_ptr<ProviderNode> node;
  std::string address;

  Peer(OntologyDocument doc, const std::string& id, bool bench = false) {
    node = std::make_unique<ProviderNode>(std::move(doc), ProviderConfig{id, bench, true});
    address = "127.0.0.1:" + std::to_string(node->start("127.0.0.1", 0));
  }
};

OntologyDocument only(OntologyDocument doc, std::initializer_list<std::size_t> keep) {
  std::vector<Instance> kept;
  for (auto i : keep) kept.push_back(doc.instances[i]);
  doc.instances = kept;
  return doc;
}

httplib::Result post(const Peer& p, const std::string& path, const std::string& body) {
  httplib::Client http("http://" + p.address);
  return http.Post(path, body, "application/json");
}

MatchRequest request(Demand d) { return {std::move(d), "r1", std::nullopt}; }

}  // namespace

TEST_CASE("a provider answers /match with raw counters and snapshots") {
  Peer p(fixtures::laptops(), "shop");
  const ProviderClient client(p.address);
  CHECK(client.healthy());
  const auto response = client.match(request(fixtures::white_laptop_demand()));
  CHECK(response.provider_id == "shop");
  CHECK(response.tbox_fingerprint == p.node->fingerprint());
  CHECK(response.request_id == "r1");
  REQUIRE(response.results.size() == 4);
  REQUIRE(response.snapshots.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(response.results[i].n_par == 0);
    CHECK(response.snapshots[i].id == response.results[i].instance_id);
  }
  CHECK(response.matchmaking_ms >= 0);

  const TBoxSummary tbox = client.fetch_tbox();
  CHECK(tbox.fingerprint == p.node->fingerprint());
  CHECK(tbox.schema.classes.size() == 4);
}

TEST_CASE("an empty provider returns no results") {
  Peer p(load_ontology_file(fixtures::data_path("laptops-empty.onto.json")), "empty");
  CHECK(ProviderClient(p.address).match(request(fixtures::white_laptop_demand())).results.empty());
}

TEST_CASE("/match rejects bad demands and foreign fingerprints") {
  Peer p(fixtures::laptops(), "shop");
  auto res = post(p, "/match", "{");
  REQUIRE(res);
  CHECK(res->status == 400);

  Demand bad = fixtures::white_laptop_demand();
  bad.constraints[0].property = "weight";
  res = post(p, "/match", match_request_to_json(request(bad)).dump());
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(json::parse(res->body).at("violations").size() == 1);

  MatchRequest tagged = request(fixtures::white_laptop_demand());
  tagged.expected_fingerprint = std::string(64, '0');
  res = post(p, "/match", match_request_to_json(tagged).dump());
  REQUIRE(res);
  CHECK(res->status == 409);
}

TEST_CASE("match messages round-trip") {
  MatchRequest r = request(fixtures::white_laptop_demand());
  r.expected_fingerprint = "abc";
  const MatchRequest back = match_request_from_json(match_request_to_json(r));
  CHECK(back.demand == r.demand);
  CHECK(back.expected_fingerprint == r.expected_fingerprint);

  Peer p(fixtures::laptops(), "shop");
  const MatchResponse m = p.node->handle_match(request(fixtures::white_laptop_demand()));
  const MatchResponse again = match_response_from_json(match_response_to_json(m));
  CHECK(again.results == m.results);
  CHECK(again.snapshots == m.snapshots);
}

TEST_CASE("publishing resources") {
  Peer p(fixtures::laptops(), "shop");
  const ProviderClient client(p.address);
  Instance fresh{"Laptop#5", "Laptop", {{"colour", {std::string("white")}}, {"warrantyYears", {std::int64_t{4}}}}, {}};
  CHECK(client.publish(fresh) == 0);
  CHECK(p.node->supply_count() == 5);

  auto res = post(p, "/resources", instance_to_json(fresh).dump());
  REQUIRE(res);
  CHECK(res->status == 409);

  Instance wrong{"Laptop#6", "Laptop", {{"colour", {std::int64_t{1}}}}, {}};
  res = post(p, "/resources", instance_to_json(wrong).dump());
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(p.node->supply_count() == 5);
  CHECK(client.match(request(fixtures::white_laptop_demand())).results.size() == 5);
}

TEST_CASE("subscriptions receive matching publications") {
  Peer p(fixtures::laptops(), "shop");
  const ProviderClient client(p.address);
  CHECK(client.subscribe("alice", fixtures::white_laptop_demand(), "2099-01-01", "white") == "white");
  CHECK(client.subscribe("bob", fixtures::white_laptop_demand(), "2099-01-01").rfind("sub-", 0) == 0);
  CHECK_THROWS_AS(client.subscribe("carol", fixtures::white_laptop_demand(), "2001-01-01"), ProtocolError);
  CHECK_THROWS_AS(client.subscribe("alice", fixtures::white_laptop_demand(), "2099-01-01", "white"), ProtocolError);

  Instance white{"Laptop#5", "Laptop", {{"colour", {std::string("white")}}, {"warrantyYears", {std::int64_t{2}}}}, {}};
  Instance black{"Laptop#6", "Laptop", {{"colour", {std::string("black")}}}, {}};
  CHECK(client.publish(white) == 2);
  CHECK(client.publish(black) == 0);
  const auto inbox = client.poll_inbox("alice");
  REQUIRE(inbox.size() == 1);
  CHECK(inbox[0].recommendation.instance_id == "Laptop#5");
  CHECK(inbox[0].recommendation.label == "white");
  CHECK(client.poll_inbox("nobody").empty());
}

TEST_CASE("fan-out over split supplies equals centralized matching") {
  const auto doc = fixtures::laptops();
  Peer a(only(doc, {0}), "yahoo");
  Peer b(only(doc, {1, 2, 3}), "ebay");
  const auto central = match_all(build_taxonomy(doc.schema), fixtures::white_laptop_demand(), doc.instances);
  for (FanoutMode mode : {FanoutMode::sync, FanoutMode::async}) {
    FanoutPlan plan;
    plan.providers = {a.address, b.address};
    plan.mode = mode;
    const FanoutResult r = fanout(plan, fixtures::white_laptop_demand());
    REQUIRE(r.merged.size() == central.size());
    for (std::size_t i = 0; i < central.size(); ++i) CHECK(r.merged[i].score == central[i]);
    CHECK(r.merged[0].provenance->provider_id == "yahoo");
    CHECK(r.merged[1].provenance->provider_id == "ebay");
    CHECK(r.failures.empty());
    CHECK(r.timing.per_provider.size() == 2);
    CHECK(r.provider_order.front().provider_id == "yahoo");
  }
}

TEST_CASE("fan-out across random splits matches the centralized ranking") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 5; ++round) {
    auto c = oracle::random_case(rng, 6, 5, 12, 4);
    OntologyDocument doc{c.schema, c.supplies};
    const std::size_t peers = 2 + rng() % 2;
    std::vector<OntologyDocument> shards(peers, OntologyDocument{c.schema, {}});
    for (const auto& s : c.supplies) shards[rng() % peers].instances.push_back(s);
    std::vector<std::unique_ptr<Peer>> nodes;
    FanoutPlan plan;
    for (std::size_t i = 0; i < peers; ++i) {
      nodes.push_back(std::make_unique<Peer>(shards[i], "p" + std::to_string(i)));
      plan.providers.push_back(nodes.back()->address);
    }
    const auto central = match_all(build_taxonomy(c.schema), c.demand, c.supplies);
    const auto merged = fanout(plan, c.demand).merged;
    REQUIRE(merged.size() == central.size());
    for (std::size_t i = 0; i < central.size(); ++i) CHECK(merged[i].score == central[i]);
  }
}

TEST_CASE("fan-out refuses mixed TBoxes before matching") {
  Peer a(fixtures::laptops(), "shop");
  Peer b(load_ontology_file(fixtures::data_path("egov.onto.json")), "egov");
  FanoutPlan plan;
  plan.providers = {a.address, b.address};
  try {
    fanout(plan, fixtures::white_laptop_demand());
    FAIL("expected a refusal");
  } catch (const FanoutError& e) {
    CHECK(e.kind() == FanoutError::Kind::tbox_mismatch);
  }
}

TEST_CASE("unreachable providers are reported, not fatal") {
  Peer a(fixtures::laptops(), "shop");
  std::string dead;
  {
    Peer gone(fixtures::laptops(), "gone");
    dead = gone.address;
    gone.node->stop();
  }
  FanoutPlan plan;
  plan.providers = {a.address, dead};
  plan.per_request_timeout_ms = 500;
  const auto r = fanout(plan, fixtures::white_laptop_demand());
  CHECK(r.merged.size() == 4);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].address == dead);

  plan.providers = {dead};
  try {
    fanout(plan, fixtures::white_laptop_demand());
    FAIL("expected all_failed");
  } catch (const FanoutError& e) {
    CHECK(e.kind() == FanoutError::Kind::all_failed);
  }
  plan.providers.clear();
  CHECK_THROWS_AS(fanout(plan, fixtures::white_laptop_demand()), FanoutError);
}

TEST_CASE("latency excludes provider-side matchmaking") {
  Peer a(fixtures::laptops(), "slow", true);
  FanoutPlan plan;
  plan.providers = {a.address};
  plan.inject_delay_ms[a.address] = 60;
  const auto r = fanout(plan, fixtures::white_laptop_demand());
  const auto& t = r.timing.per_provider.at(0);
  CHECK(t.wall_ms >= 60);
  CHECK(t.latency_ms >= 0);
  CHECK(t.latency_ms == doctest::Approx(t.wall_ms - t.matchmaking_ms).epsilon(1e-9));
  CHECK(r.timing.total_wall_ms >= t.wall_ms);
  CHECK(timing_to_json(r.timing).contains("merge_ms"));
}
