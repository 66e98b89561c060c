#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ontomatch/matchmaker.hpp"
#include "ontomatch/ontology.hpp"

namespace ontomatch {

/// Shape of a synthetic ontology: how many classes and properties of each kind.
struct OntologyProfile {
  std::string name;
  std::size_t classes = 1;
  std::size_t object_properties = 0;
  std::size_t datatype_properties = 0;
};

/// The four evaluation ontologies: computer, books, doc-egov, wine.
const std::vector<OntologyProfile>& reference_profiles();
std::optional<OntologyProfile> find_profile(std::string_view name);  // case-insensitive

/// Deterministic in (profile, instances, seed). The class hierarchy is a
/// tree, so sibling disjointness never makes a class unsatisfiable.
/// Throws std::invalid_argument on a zero class count.
OntologyDocument generate_ontology(const OntologyProfile& profile, std::size_t instances, std::uint64_t seed);

/// A demand built around one concept with `property_count` constraints.
/// For a fixed seed, the k-property demand extends the (k-1)-property one.
Demand generate_demand(const OntologySchema& schema, std::size_t property_count, std::uint64_t seed);

}  // namespace ontomatch
