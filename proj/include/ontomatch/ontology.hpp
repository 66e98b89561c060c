#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ontomatch/value.hpp"

namespace ontomatch {

enum class PropertyKind { datatype, object };

struct ClassDef {
  std::string name;
  std::set<std::string> equivalent_to;
  std::set<std::string> subclass_of;
  std::set<std::string> disjoint_with;

  bool operator==(const ClassDef&) const = default;
};

struct PropertyDef {
  std::string name;
  PropertyKind kind = PropertyKind::datatype;
  ValueType datatype = ValueType::text;  // datatype properties only
  std::string range_class;               // object properties only
  bool functional = false;
  std::optional<std::string> inverse_of;
  std::optional<std::uint32_t> max_cardinality;

  /// At most one value may be asserted.
  bool single_valued() const { return functional || (max_cardinality && *max_cardinality <= 1); }

  bool operator==(const PropertyDef&) const = default;
};

using PropertyValues = std::map<std::string, std::vector<Value>>;

/// An advertisement (ABox individual). Properties with no values are never stored.
struct Instance {
  std::string id;
  std::string class_name;
  PropertyValues values;
  std::set<std::string> categories;

  bool operator==(const Instance&) const = default;
};

struct OntologySchema {
  std::string uri;
  std::vector<std::string> keywords;
  std::vector<ClassDef> classes;
  std::vector<PropertyDef> properties;

  const ClassDef* find_class(std::string_view name) const;
  const PropertyDef* find_property(std::string_view name) const;
  std::size_t count_properties(PropertyKind kind) const;
};

struct OntologyDocument {
  OntologySchema schema;
  std::vector<Instance> instances;
};

struct Violation {
  enum class Kind {
    duplicate,
    unknown_class,
    unknown_property,
    range,
    cardinality,
    invalid_axiom,
    invalid_property,
    malformed,
  };
  Kind kind;
  std::string name;  // offending class, property, or instance
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::string_view to_string(Violation::Kind k);

/// Malformed document text; line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed document that breaks a schema or instance invariant.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

OntologyDocument parse_ontology(std::string_view document);
OntologyDocument ontology_from_json(const json& doc);
OntologyDocument load_ontology_file(const std::string& path);

json ontology_to_json(const OntologyDocument& doc);
std::string serialize_ontology(const OntologyDocument& doc);

Instance instance_from_json(const json& j);
json instance_to_json(const Instance& instance);
json values_to_json(const PropertyValues& values);

std::vector<Violation> validate_schema(const OntologySchema& schema);
std::vector<Violation> validate_instance(const OntologySchema& schema, const Instance& instance);

/// Hex SHA-256 of the canonical TBox (classes, axioms, properties). uri,
/// keywords and instances do not contribute.
std::string tbox_fingerprint(const OntologySchema& schema);

/// Lowercase keyword normalization shared with the registry.
std::string lowercase(std::string_view s);

}  // namespace ontomatch
