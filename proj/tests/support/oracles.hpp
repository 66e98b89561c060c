#pragma once

// Reference implementations written from the definitions, independent of
// the library's data structures, plus random input generators.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ontomatch/matchmaker.hpp"
#include "ontomatch/ontology.hpp"
#include "ontomatch/profile.hpp"
#include "ontomatch/registry.hpp"

namespace oracle {

using namespace ontomatch;

/// Naive fixpoint over the axioms, by class name.
struct BruteTaxonomy {
  std::map<std::string, std::set<std::string>> supers;  // reflexive
  std::set<std::pair<std::string, std::string>> declared_disjoint;
  bool inconsistent = false;

  bool subsumes(const std::string& sub, const std::string& sup) const;
  bool equivalent(const std::string& a, const std::string& b) const;
  bool disjoint(const std::string& a, const std::string& b) const;
};

BruteTaxonomy brute_taxonomy(const OntologySchema& schema);

/// Counters straight from the definitions, with subsumption and
/// disjointness answered by the brute-force taxonomy on every call.
RawMatch naive_raw(const BruteTaxonomy& t, const Demand& demand, const Instance& supply);
std::vector<MatchScore> naive_match_all(const BruteTaxonomy& t, const Demand& demand,
                                        const std::vector<Instance>& supplies);

/// Three-way comparison over the generators' value spaces.
int order_of(const Value& a, const Value& b);

/// Random inputs. Classes C0..Cn-1, properties p0..pm-1.
struct RandomCase {
  OntologySchema schema;
  std::vector<Instance> supplies;
  Demand demand;
};

OntologySchema random_schema(std::mt19937_64& rng, std::size_t max_classes, std::size_t max_properties);
Instance random_instance(std::mt19937_64& rng, const OntologySchema& schema, const std::string& id);
Demand random_demand(std::mt19937_64& rng, const OntologySchema& schema, std::size_t max_constraints);
/// A consistent schema (retrying until brute force finds no clash) with supplies and a demand.
RandomCase random_case(std::mt19937_64& rng, std::size_t max_classes, std::size_t max_properties,
                       std::size_t max_supplies, std::size_t max_constraints);

/// Registry semantics as a fold over a map keyed by URI.
struct RegistryModel {
  std::map<std::string, RegistryEntry> entries;

  void register_entry(const RegistryEntry& e);  // e.registered_at already stamped
  bool deregister(const std::string& uri);
  std::vector<RegistryEntry> search(const std::set<std::string>& keywords) const;
};

/// Expected PUSH deliveries for one publication: every (user, valid query)
/// whose naive match of the instance has n_par = 0.
std::vector<std::pair<std::string, std::string>> expected_deliveries(const std::vector<UserProfile>& profiles,
                                                                     const Instance& published,
                                                                     const BruteTaxonomy& t, Timestamp at);

}  // namespace oracle
