#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ontomatch/ontology.hpp"
#include "ontomatch/taxonomy.hpp"
#include "ontomatch/value.hpp"

namespace ontomatch {

enum class ConstraintOp { eq, ne, lt, le, gt, ge, range };

std::string_view to_string(ConstraintOp op);
std::optional<ConstraintOp> constraint_op_from_string(std::string_view s);
bool is_ordering(ConstraintOp op);

/// A weighted predicate on one property. `upper` is set only for `range`,
/// whose bounds are `value` (low) and `upper` (high), both inclusive.
struct Constraint {
  std::string property;
  ConstraintOp op = ConstraintOp::eq;
  Value value;
  std::optional<Value> upper;
  int confidence = 10;

  double weight() const { return confidence / 10.0; }
  bool operator==(const Constraint&) const = default;
};

struct Demand {
  std::string concept_name;
  int concept_confidence = 10;
  std::vector<Constraint> constraints;
  std::string ontology_uri;

  bool operator==(const Demand&) const = default;
};

/// Per-supply counters before normalization. Providers ship these over the
/// wire so that ranks can be normalized once, over the pooled population.
struct RawMatch {
  std::string instance_id;
  double n_par = 0;
  double n_pot = 0;
  std::uint32_t n_add = 0;
  std::vector<std::string> additional_properties;  // sorted

  bool operator==(const RawMatch&) const = default;
};

struct MatchScore {
  std::string instance_id;
  double n_par = 0;
  double n_pot = 0;
  std::uint32_t n_add = 0;
  std::vector<std::string> additional_properties;
  double rank_par = 0;
  double rank_pot = 0;
  double rank_add = 0;
  double rank = 0;

  bool operator==(const MatchScore&) const = default;
};

class DemandError : public std::runtime_error {
 public:
  explicit DemandError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class SchemaMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Memoized pairwise class comparisons. Disjointness is symmetric, so one
/// unordered pair holds a single entry; the same entry also records both
/// subsumption directions, which serves the not-among test without a second
/// evaluation. Confined to one match_all invocation.
class ComparisonCache {
 public:
  bool disjoint(const Taxonomy& t, ClassId a, ClassId b);
  /// True when `supply` is not among (not subsumed by) `demand`.
  bool not_among(const Taxonomy& t, ClassId supply, ClassId demand);

  std::uint64_t lookups() const { return lookups_; }
  std::uint64_t evaluations() const { return evaluations_; }
  std::size_t entries() const { return memo_.size(); }

 private:
  struct Verdict {
    bool disjoint;
    bool low_under_high;
    bool high_under_low;
  };
  const Verdict& lookup(const Taxonomy& t, ClassId a, ClassId b);

  std::unordered_map<std::uint64_t, Verdict> memo_;
  std::uint64_t lookups_ = 0;
  std::uint64_t evaluations_ = 0;
};

struct CacheStats {
  std::uint64_t lookups = 0;
  std::uint64_t evaluations = 0;
};
CacheStats cache_stats(const ComparisonCache& cache);

/// Throws TypeMismatch when the constraint operand and `v` are incomparable.
bool satisfies(const Constraint& c, const Value& v);

std::vector<Violation> validate_demand(const OntologySchema& schema, const Demand& demand);
void check_demand(const OntologySchema& schema, const Demand& demand);  // throws DemandError

RawMatch match_one(const Taxonomy& taxonomy, const Demand& demand, const Instance& supply,
                   ComparisonCache& cache);

/// Serial reference: match_one per supply with one shared cache, then
/// normalization and ranking.
std::vector<MatchScore> match_all(const Taxonomy& taxonomy, const Demand& demand,
                                  std::span<const Instance> supplies);
std::vector<MatchScore> match_all(const Taxonomy& taxonomy, const Demand& demand,
                                  std::span<const Instance> supplies, ComparisonCache& cache);

/// OpenMP over supplies. Class comparisons are resolved once per distinct
/// supply class before the parallel loop; output is identical to match_all.
std::vector<MatchScore> match_all_parallel(const Taxonomy& taxonomy, const Demand& demand,
                                           std::span<const Instance> supplies);

/// Raw counters only, in supply order.
std::vector<RawMatch> score_supplies(const Taxonomy& taxonomy, const Demand& demand,
                                     std::span<const Instance> supplies, ComparisonCache& cache);
std::vector<RawMatch> score_supplies_parallel(const Taxonomy& taxonomy, const Demand& demand,
                                              std::span<const Instance> supplies);

/// Unified rank over normalized components. The elicitation component is a
/// bonus: more unspecified-but-known properties lower (improve) the rank.
double unified_rank(double rank_par, double rank_pot, double rank_add, bool add_present);

/// Normalizes each counter by its maximum over `raw`; keeps input order.
std::vector<MatchScore> normalize_ranks(std::span<const RawMatch> raw);

/// Ascending rank, ties by instance id.
void sort_by_rank(std::vector<MatchScore>& scores);

Demand demand_from_json(const json& j);
json demand_to_json(const Demand& d);
json raw_to_json(const RawMatch& r);
RawMatch raw_from_json(const json& j);
json score_to_json(const MatchScore& s);
MatchScore score_from_json(const json& j);

}  // namespace ontomatch
