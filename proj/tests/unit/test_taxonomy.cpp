#include <doctest.h>

#include "oracles.hpp"
#include "ontomatch/taxonomy.hpp"

using namespace ontomatch;

namespace {

OntologySchema schema_of(std::vector<ClassDef> classes) {
  OntologySchema s;
  s.uri = "u";
  s.classes = std::move(classes);
  return s;
}

}  // namespace

TEST_CASE("subsumption is reflexive and transitive") {
  const Taxonomy t = build_taxonomy(schema_of({{"A", {}, {}, {}}, {"B", {}, {"A"}, {}}, {"C", {}, {"B"}, {}}}));
  CHECK(t.subsumes("C", "A"));
  CHECK(t.subsumes("A", "A"));
  CHECK_FALSE(t.subsumes("A", "C"));
}

TEST_CASE("equivalence shares relations and a representative") {
  const Taxonomy t = build_taxonomy(
      schema_of({{"Laptop", {"PortableComputer"}, {}, {}}, {"PortableComputer", {}, {}, {}}, {"Desk", {}, {}, {"Laptop"}}}));
  CHECK(t.equivalent(t.id("Laptop"), t.id("PortableComputer")));
  CHECK(t.representative(t.id("Laptop")) == t.representative(t.id("PortableComputer")));
  CHECK(t.disjoint("Desk", "PortableComputer"));
  CHECK(t.subsumes("PortableComputer", "Laptop"));
}

TEST_CASE("disjointness is symmetric and propagates down subsumption") {
  const Taxonomy t = build_taxonomy(schema_of(
      {{"A", {}, {}, {"B"}}, {"B", {}, {}, {}}, {"A1", {}, {"A"}, {}}, {"B1", {}, {"B"}, {}}, {"C", {}, {}, {}}}));
  CHECK(t.disjoint("B", "A"));
  CHECK(t.disjoint("A1", "B1"));
  CHECK(t.disjoint("B1", "A"));
  CHECK_FALSE(t.disjoint("A", "C"));
}

TEST_CASE("subclass cycles collapse into equivalence") {
  const Taxonomy t = build_taxonomy(schema_of({{"A", {}, {"B"}, {}}, {"B", {}, {"A"}, {}}}));
  CHECK(t.equivalent(t.id("A"), t.id("B")));
}

TEST_CASE("inconsistent schemas are rejected") {
  CHECK_THROWS_AS(build_taxonomy(schema_of({{"A", {}, {}, {"B"}}, {"B", {}, {"A"}, {}}})), InconsistentTaxonomy);
  CHECK_THROWS_AS(build_taxonomy(schema_of({{"A", {"B"}, {}, {"B"}}, {"B", {}, {}, {}}})), InconsistentTaxonomy);
}

TEST_CASE("unknown class lookup throws") {
  const Taxonomy t = build_taxonomy(schema_of({{"A", {}, {}, {}}}));
  CHECK_FALSE(t.find("Z"));
  CHECK_THROWS_AS(t.id("Z"), UnknownClass);
}

TEST_CASE("closure agrees with the brute-force fixpoint on random schemas") {
  std::mt19937_64 rng(2024);
  int consistent = 0;
  for (int round = 0; round < 300; ++round) {
    const OntologySchema s = oracle::random_schema(rng, 10, 1);
    const oracle::BruteTaxonomy brute = oracle::brute_taxonomy(s);
    if (brute.inconsistent) {
      CHECK_THROWS_AS(build_taxonomy(s), InconsistentTaxonomy);
      continue;
    }
    ++consistent;
    const Taxonomy t = build_taxonomy(s);
    for (const auto& a : s.classes) {
      for (const auto& b : s.classes) {
        CHECK(t.subsumes(a.name, b.name) == brute.subsumes(a.name, b.name));
        CHECK(t.disjoint(a.name, b.name) == brute.disjoint(a.name, b.name));
        CHECK(t.equivalent(t.id(a.name), t.id(b.name)) == brute.equivalent(a.name, b.name));
      }
    }
  }
  CHECK(consistent > 100);
}

TEST_CASE("rebuilding is idempotent") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 100; ++round) {
    const OntologySchema s = oracle::random_schema(rng, 8, 1);
    if (oracle::brute_taxonomy(s).inconsistent) continue;
    CHECK(build_taxonomy(s).same_relations(build_taxonomy(s)));
  }
}
