#pragma once

#include <string>

#include "ontomatch/matchmaker.hpp"
#include "ontomatch/ontology.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(ONTOMATCH_DATA_DIR) + "/" + name; }

inline ontomatch::OntologyDocument laptops() { return ontomatch::load_ontology_file(data_path("laptops.onto.json")); }

/// White colour and at least two years of warranty, both at confidence 10.
inline ontomatch::Demand white_laptop_demand() {
  using namespace ontomatch;
  Demand d;
  d.concept_name = "Laptop";
  d.ontology_uri = "http://example.org/shop/computer.owl";
  d.constraints.push_back({"colour", ConstraintOp::eq, std::string("white"), std::nullopt, 10});
  d.constraints.push_back({"warrantyYears", ConstraintOp::ge, std::int64_t{2}, std::nullopt, 10});
  return d;
}

}  // namespace fixtures
