#include <doctest.h>

#include "ontomatch/bench.hpp"
#include "ontomatch/synth.hpp"
#include "ontomatch/taxonomy.hpp"

using namespace ontomatch;

TEST_CASE("reference profiles fix class and property counts") {
  const auto& profiles = reference_profiles();
  REQUIRE(profiles.size() == 4);
  const auto egov = find_profile("Doc-EGov");
  REQUIRE(egov);
  CHECK(egov->classes == 22);
  CHECK(egov->object_properties == 10);
  CHECK(egov->datatype_properties == 67);
  CHECK_FALSE(find_profile("music"));
}

TEST_CASE("generated ontologies are valid, consistent, and sized by the profile") {
  for (const auto& profile : reference_profiles()) {
    const OntologyDocument doc = generate_ontology(profile, 50, 7);
    CHECK(doc.schema.classes.size() == profile.classes);
    CHECK(doc.schema.count_properties(PropertyKind::object) == profile.object_properties);
    CHECK(doc.schema.count_properties(PropertyKind::datatype) == profile.datatype_properties);
    CHECK(doc.instances.size() == 50);
    CHECK(validate_schema(doc.schema).empty());
    for (const auto& i : doc.instances) CHECK(validate_instance(doc.schema, i).empty());
    CHECK_NOTHROW(build_taxonomy(doc.schema));
    CHECK(parse_ontology(serialize_ontology(doc)).instances == doc.instances);
  }
  CHECK_THROWS_AS(generate_ontology({"none", 0, 0, 0}, 1, 1), std::invalid_argument);
}

TEST_CASE("generation is deterministic in the seed") {
  const auto p = *find_profile("books");
  CHECK(serialize_ontology(generate_ontology(p, 20, 3)) == serialize_ontology(generate_ontology(p, 20, 3)));
  CHECK(serialize_ontology(generate_ontology(p, 20, 3)) != serialize_ontology(generate_ontology(p, 20, 4)));
}

TEST_CASE("a k-property demand extends the (k-1)-property one") {
  const auto doc = generate_ontology(*find_profile("doc-egov"), 10, 1);
  Demand prev = generate_demand(doc.schema, 0, 9);
  for (std::size_t k = 1; k <= 6; ++k) {
    const Demand d = generate_demand(doc.schema, k, 9);
    CHECK(d.constraints.size() == k);
    CHECK(d.concept_name == prev.concept_name);
    CHECK(std::equal(prev.constraints.begin(), prev.constraints.end(), d.constraints.begin()));
    CHECK(validate_demand(doc.schema, d).empty());
    prev = d;
  }
}

TEST_CASE("bench specs are validated") {
  BenchSpec spec;
  spec.profile = *find_profile("computer");
  CHECK_NOTHROW(validate_bench_spec(spec));
  auto broken = spec;
  broken.repetitions = 1;
  CHECK_THROWS_AS(validate_bench_spec(broken), std::invalid_argument);
  broken = spec;
  broken.query_properties = {7};
  CHECK_THROWS_AS(validate_bench_spec(broken), std::invalid_argument);
  broken = spec;
  broken.inject_delay_ms = {50};
  CHECK_THROWS_AS(validate_bench_spec(broken), std::invalid_argument);
  broken.peers = 2;
  broken.inject_delay_ms = {-1};
  CHECK_THROWS_AS(validate_bench_spec(broken), std::invalid_argument);
}

TEST_CASE("centralized bench rows") {
  BenchSpec spec;
  spec.profile = *find_profile("computer");
  spec.instance_count = 100;
  spec.query_properties = {1, 2};
  spec.repetitions = 2;
  const auto rows = run_bench(spec);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].query == "Q1-1-1");
  CHECK(rows[1].properties == 2);
  for (const auto& r : rows) {
    CHECK(r.resources == 100);
    CHECK(r.latency_ms == 0);
    CHECK(r.total_ms >= r.matchmaking_ms);
  }
  const std::string csv = bench_csv(rows);
  CHECK(csv.rfind("query,properties,peers,resources,matchmaking_ms,latency_ms,total_ms\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("distributed bench rows") {
  BenchSpec spec;
  spec.profile = *find_profile("computer");
  spec.instance_count = 60;
  spec.query_properties = {1};
  spec.repetitions = 2;
  spec.peers = 3;
  spec.mode = FanoutMode::async;
  const auto rows = run_bench(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].peers == 3);
  CHECK(rows[0].resources == 60);
  CHECK(rows[0].total_ms >= rows[0].latency_ms);
}
