#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ontomatch/ontology.hpp"

namespace ontomatch {

using ClassId = std::uint32_t;

class UnknownClass : public std::out_of_range {
 public:
  explicit UnknownClass(std::string_view name);
};

/// Closure makes some class disjoint with itself or with one of its subsumers.
class InconsistentTaxonomy : public std::runtime_error {
 public:
  InconsistentTaxonomy(const std::string& klass, const std::string& detail);
  const std::string& class_name() const { return class_; }

 private:
  std::string class_;
};

/// Dense square bit relation over class ids.
class BitRelation {
 public:
  BitRelation() = default;
  explicit BitRelation(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  bool test(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u; }
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
  // row(i) |= row(j); returns true if row(i) changed.
  bool merge_row(std::size_t i, std::size_t j);
  std::size_t size() const { return n_; }

  bool operator==(const BitRelation&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Subsumption, equivalence, and disjointness closure of a TBox. Immutable
/// after build_taxonomy; all queries are safe for concurrent readers.
class Taxonomy {
 public:
  std::size_t size() const { return names_.size(); }
  std::optional<ClassId> find(std::string_view name) const;
  ClassId id(std::string_view name) const;  // throws UnknownClass
  const std::string& name(ClassId id) const { return names_[id]; }
  const std::vector<std::string>& names() const { return names_; }

  /// Canonical member of the equivalence class of `id`.
  ClassId representative(ClassId id) const { return representative_[id]; }

  bool subsumes(ClassId sub, ClassId sup) const { return subsumption_.test(sub, sup); }
  bool disjoint(ClassId a, ClassId b) const { return disjointness_.test(a, b); }
  bool equivalent(ClassId a, ClassId b) const { return representative_[a] == representative_[b]; }

  bool subsumes(std::string_view sub, std::string_view sup) const { return subsumes(id(sub), id(sup)); }
  bool disjoint(std::string_view a, std::string_view b) const { return disjoint(id(a), id(b)); }

  /// Groups of mutually equivalent classes (singletons included), sorted.
  std::vector<std::vector<std::string>> equivalence_groups() const;

  bool same_relations(const Taxonomy& other) const;

 private:
  friend Taxonomy build_taxonomy(const OntologySchema& schema);

  std::vector<std::string> names_;
  std::map<std::string, ClassId, std::less<>> index_;
  std::vector<ClassId> representative_;
  BitRelation subsumption_;
  BitRelation disjointness_;
};

/// Equivalence partition, reflexive-transitive subsumption (subclass cycles
/// collapse into equivalence), and disjointness propagated down subsumption
/// on both sides. Throws InconsistentTaxonomy.
Taxonomy build_taxonomy(const OntologySchema& schema);

}  // namespace ontomatch
