#include <doctest.h>

#include <filesystem>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ontomatch/profile.hpp"

using namespace ontomatch;

namespace {

const Timestamp kNow = parse_timestamp_or_throw("2026-05-01T12:00:00Z");

SavedQuery white_query(const std::string& id, const std::string& until) {
  return {id, fixtures::white_laptop_demand(), until};
}

Instance laptop(const std::string& id, const std::string& colour) {
  return {id, "Laptop", {{"colour", {colour}}, {"warrantyYears", {std::int64_t{3}}}}, {}};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("ontomatch-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::vector<Rule> young_rule() { return load_rules_file(fixtures::data_path("rules.json")); }

}  // namespace

TEST_CASE("rules classify by conjunction of conditions") {
  const auto rules = young_rule();
  REQUIRE(rules.size() == 1);
  CHECK(evaluate_rules(rules, {"u", {{"age", std::int64_t{25}}}, {}}, kNow) == std::set<std::string>{"Student"});
  CHECK(evaluate_rules(rules, {"u", {{"age", std::int64_t{30}}}, {}}, kNow).empty());
  CHECK(evaluate_rules(rules, {"u", {}, {}}, kNow).empty());
  CHECK_THROWS_AS(evaluate_rules(rules, {"u", {{"age", std::string("young")}}, {}}, kNow), TypeMismatch);

  std::vector<Rule> two{{"r", {{"age", ConstraintOp::lt, std::int64_t{30}}, {"city", ConstraintOp::eq, std::string("Rome")}},
                         "Local"}};
  CHECK(evaluate_rules(two, {"u", {{"age", std::int64_t{20}}, {"city", std::string("Rome")}}, {}}, kNow).size() == 1);
  CHECK(evaluate_rules(two, {"u", {{"age", std::int64_t{20}}, {"city", std::string("Pisa")}}, {}}, kNow).empty());
}

TEST_CASE("age derives from birthdate unless set explicitly") {
  const auto rules = young_rule();
  CHECK(evaluate_rules(rules, {"u", {{"birthdate", std::string("1997-05-02")}}, {}}, kNow).size() == 1);
  CHECK(evaluate_rules(rules, {"u", {{"birthdate", std::string("1996-05-01")}}, {}}, kNow).empty());
  CHECK(evaluate_rules(rules, {"u", {{"birthdate", std::string("2000-01-01")}, {"age", std::int64_t{40}}}, {}}, kNow)
            .empty());
}

TEST_CASE("rules are validated against the profiler schema") {
  const auto profiler = load_ontology_file(fixtures::data_path("profiler.onto.json")).schema;
  CHECK(validate_rules(young_rule(), profiler).empty());
  const std::vector<Rule> bad{{"r", {{"income", ConstraintOp::gt, std::int64_t{1}}}, "Rich"}};
  const auto v = validate_rules(bad, profiler);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::unknown_property);
  CHECK(rules_from_json(json::array({rule_to_json(young_rule()[0])})) == young_rule());
}

TEST_CASE("login recommends category matches and replays saved queries") {
  const auto doc = fixtures::laptops();
  const Taxonomy t = build_taxonomy(doc.schema);
  UserProfile p{"alice", {{"age", std::int64_t{25}}}, {}};
  auto recs = on_login(p, young_rule(), doc.instances, t, doc.schema, kNow);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].instance_id == "Laptop#3");
  CHECK(recs[1].instance_id == "Laptop#4");
  for (const auto& r : recs) {
    CHECK(r.source == RecommendationSource::category);
    CHECK(r.label == "Student");
    CHECK(r.rank == 1.0);
  }

  p.saved_queries.push_back(white_query("q1", "2026-12-31"));
  recs = on_login(p, young_rule(), doc.instances, t, doc.schema, kNow);
  REQUIRE(recs.size() == 4);
  CHECK(recs[0].instance_id == "Laptop#1");
  CHECK(recs[0].source == RecommendationSource::saved_query);
  for (const auto& r : recs) CHECK(r.source == RecommendationSource::saved_query);

  p.attributes["age"] = std::int64_t{50};
  p.saved_queries[0].valid_until = "2026-04-30";
  CHECK(on_login(p, young_rule(), doc.instances, t, doc.schema, kNow).empty());
}

TEST_CASE("publication reaches valid, non-conflicting saved queries once") {
  const auto doc = fixtures::laptops();
  const Taxonomy t = build_taxonomy(doc.schema);
  ProfileStore store;
  store.save_query("alice", white_query("q1", "2026-12-31"), kNow);
  store.save_query("bob", white_query("q2", "2026-06-01"), kNow);

  const EventRecord event{EventKind::resource_published, "Laptop#9", "2026-05-10T00:00:00Z"};
  const auto delivered = store.publish(event, laptop("Laptop#9", "white"), t, doc.schema);
  CHECK(delivered.size() == 2);
  CHECK(store.inbox("alice").size() == 1);
  CHECK(store.inbox("alice")[0].recommendation.instance_id == "Laptop#9");
  CHECK(store.inbox("alice")[0].recommendation.label == "q1");

  CHECK(store.publish(event, laptop("Laptop#9", "white"), t, doc.schema).empty());
  CHECK(store.inbox("alice").size() == 1);

  CHECK(store.publish({EventKind::resource_published, "Laptop#8", "2026-05-11T00:00:00Z"},
                      laptop("Laptop#8", "black"), t, doc.schema)
            .empty());

  const auto late = store.publish({EventKind::resource_published, "Laptop#7", "2026-07-01T00:00:00Z"},
                                  laptop("Laptop#7", "white"), t, doc.schema);
  REQUIRE(late.size() == 1);
  CHECK(late[0].user_id == "alice");
}

TEST_CASE("deliveries agree with the oracle on random populations") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 100; ++round) {
    const auto c = oracle::random_case(rng, 6, 5, 3, 3);
    const Taxonomy t = build_taxonomy(c.schema);
    std::vector<UserProfile> profiles;
    for (int u = 0; u < 3; ++u) {
      UserProfile p{"u" + std::to_string(u), {}, {}};
      for (int q = 0; q < 2; ++q) {
        const std::string until = (rng() % 3 == 0) ? "2026-04-01" : "2026-12-01";
        p.saved_queries.push_back({"q" + std::to_string(q), oracle::random_demand(rng, c.schema, 3), until});
      }
      profiles.push_back(p);
    }
    const Instance published = oracle::random_instance(rng, c.schema, "new");
    const EventRecord event{EventKind::resource_published, published.id, format_timestamp(kNow)};
    std::vector<std::pair<std::string, std::string>> got;
    for (const auto& [user, rec] : on_resource_published(event, published, profiles, t, c.schema))
      got.emplace_back(user, rec.label);
    CHECK(got == oracle::expected_deliveries(profiles, published, oracle::brute_taxonomy(c.schema), kNow));
  }
}

TEST_CASE("saving rejects expired and duplicate queries") {
  ProfileStore store;
  CHECK_THROWS_AS(store.save_query("alice", white_query("q", "2026-04-30"), kNow), std::invalid_argument);
  store.save_query("alice", white_query("q", "2026-05-01T12:00:00Z"), kNow);
  CHECK_THROWS_AS(store.save_query("alice", white_query("q", "2026-12-31"), kNow), std::invalid_argument);
  CHECK_THROWS_AS(store.save_query("../etc", white_query("x", "2026-12-31"), kNow), std::invalid_argument);

  store.expire(parse_timestamp_or_throw("2026-05-02"));
  CHECK(store.get("alice")->saved_queries.empty());
}

TEST_CASE("the store persists profiles and inboxes") {
  const auto doc = fixtures::laptops();
  const Taxonomy t = build_taxonomy(doc.schema);
  TempDir dir;
  {
    ProfileStore store(dir.path);
    store.put({"alice", {{"age", std::int64_t{25}}, {"city", std::string("Rome")}}, {}});
    store.save_query("alice", white_query("q1", "2026-12-31"), kNow);
    store.publish({EventKind::resource_published, "Laptop#9", "2026-05-10T00:00:00Z"}, laptop("Laptop#9", "white"), t,
                  doc.schema);
  }
  ProfileStore reloaded(dir.path);
  const auto p = reloaded.get("alice");
  REQUIRE(p);
  CHECK(p->attributes.at("city") == Value{std::string("Rome")});
  CHECK(p->saved_queries.size() == 1);
  CHECK(profile_from_json(profile_to_json(*p)) == *p);
  REQUIRE(reloaded.inbox("alice").size() == 1);
  const InboxEntry e = reloaded.inbox("alice")[0];
  CHECK(inbox_entry_from_json(inbox_entry_to_json(e)) == e);
}
