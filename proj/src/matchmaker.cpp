#include "ontomatch/matchmaker.hpp"

#include <algorithm>
#include <exception>

#include <omp.h>

#include "json_util.hpp"

namespace ontomatch {

std::string_view to_string(ConstraintOp op) {
  switch (op) {
    case ConstraintOp::eq: return "eq";
    case ConstraintOp::ne: return "ne";
    case ConstraintOp::lt: return "lt";
    case ConstraintOp::le: return "le";
    case ConstraintOp::gt: return "gt";
    case ConstraintOp::ge: return "ge";
    case ConstraintOp::range: return "range";
  }
  return "eq";
}

std::optional<ConstraintOp> constraint_op_from_string(std::string_view s) {
  for (auto op : {ConstraintOp::eq, ConstraintOp::ne, ConstraintOp::lt, ConstraintOp::le, ConstraintOp::gt,
                  ConstraintOp::ge, ConstraintOp::range}) {
    if (to_string(op) == s) return op;
  }
  return std::nullopt;
}

bool is_ordering(ConstraintOp op) { return op != ConstraintOp::eq && op != ConstraintOp::ne; }

DemandError::DemandError(std::vector<Violation> violations)
    : std::runtime_error(ValidationError(violations).what()), violations_(std::move(violations)) {}

// ---------------------------------------------------------------------------
// ComparisonCache

const ComparisonCache::Verdict& ComparisonCache::lookup(const Taxonomy& t, ClassId a, ClassId b) {
  ++lookups_;
  const ClassId low = std::min(a, b);
  const ClassId high = std::max(a, b);
  const std::uint64_t key = (std::uint64_t{low} << 32) | high;
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  ++evaluations_;
  Verdict v{t.disjoint(low, high), t.subsumes(low, high), t.subsumes(high, low)};
  return memo_.emplace(key, v).first->second;
}

bool ComparisonCache::disjoint(const Taxonomy& t, ClassId a, ClassId b) { return lookup(t, a, b).disjoint; }

bool ComparisonCache::not_among(const Taxonomy& t, ClassId supply, ClassId demand) {
  const Verdict& v = lookup(t, supply, demand);
  const bool among = supply <= demand ? v.low_under_high : v.high_under_low;
  return !among;
}

CacheStats cache_stats(const ComparisonCache& cache) { return {cache.lookups(), cache.evaluations()}; }

// ---------------------------------------------------------------------------
// Constraint semantics

bool satisfies(const Constraint& c, const Value& v) {
  switch (c.op) {
    case ConstraintOp::eq: return values_equal(v, c.value);
    case ConstraintOp::ne: return !values_equal(v, c.value);
    case ConstraintOp::lt: return compare_values(v, c.value) == std::partial_ordering::less;
    case ConstraintOp::le: return compare_values(v, c.value) != std::partial_ordering::greater &&
                                  compare_values(v, c.value) != std::partial_ordering::unordered;
    case ConstraintOp::gt: return compare_values(v, c.value) == std::partial_ordering::greater;
    case ConstraintOp::ge: return compare_values(v, c.value) != std::partial_ordering::less &&
                                  compare_values(v, c.value) != std::partial_ordering::unordered;
    case ConstraintOp::range: {
      if (!c.upper) throw TypeMismatch("range constraint on '" + c.property + "' lacks an upper bound");
      const auto lo = compare_values(v, c.value);
      const auto hi = compare_values(v, *c.upper);
      return (lo == std::partial_ordering::greater || lo == std::partial_ordering::equivalent) &&
             (hi == std::partial_ordering::less || hi == std::partial_ordering::equivalent);
    }
  }
  return false;
}

namespace {

bool orderable(const PropertyDef& p, const Constraint& c) {
  if (p.kind == PropertyKind::object) return false;
  if (p.datatype == ValueType::integer || p.datatype == ValueType::decimal) return true;
  if (p.datatype != ValueType::text) return false;
  auto date = [](const Value& v) {
    const auto* s = std::get_if<std::string>(&v);
    return s && is_iso_date(*s);
  };
  return date(c.value) && (!c.upper || date(*c.upper));
}

bool operand_conforms(const PropertyDef& p, const Value& v) {
  if (p.kind == PropertyKind::object) return std::holds_alternative<std::string>(v);
  return conforms(v, p.datatype);
}

}  // namespace

std::vector<Violation> validate_demand(const OntologySchema& schema, const Demand& demand) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  if (!schema.find_class(demand.concept_name))
    out.push_back({K::unknown_class, demand.concept_name, "demanded concept is not declared"});
  if (demand.concept_confidence < 1 || demand.concept_confidence > 10)
    out.push_back({K::range, "concept_confidence", "confidence must lie in 1..10"});

  std::set<std::string> seen;
  for (const auto& c : demand.constraints) {
    if (!seen.insert(c.property).second) {
      out.push_back({K::duplicate, c.property, "property constrained twice"});
      continue;
    }
    if (c.confidence < 1 || c.confidence > 10)
      out.push_back({K::range, c.property, "confidence must lie in 1..10"});
    const PropertyDef* p = schema.find_property(c.property);
    if (!p) {
      out.push_back({K::unknown_property, c.property, "constraint names an undeclared property"});
      continue;
    }
    if (!operand_conforms(*p, c.value) || (c.upper && !operand_conforms(*p, *c.upper))) {
      out.push_back({K::range, c.property, "operand does not conform to the property range"});
      continue;
    }
    if (c.op == ConstraintOp::range && !c.upper) {
      out.push_back({K::malformed, c.property, "range needs [low, high]"});
      continue;
    }
    if (c.op != ConstraintOp::range && c.upper) {
      out.push_back({K::malformed, c.property, "only range takes two bounds"});
      continue;
    }
    if (is_ordering(c.op) && !orderable(*p, c)) {
      out.push_back({K::invalid_property, c.property,
                     "operator " + std::string(to_string(c.op)) + " needs a numeric or ISO-date operand"});
      continue;
    }
    if (c.op == ConstraintOp::range && compare_values(c.value, *c.upper) == std::partial_ordering::greater)
      out.push_back({K::range, c.property, "range bounds out of order"});
  }
  return out;
}

void check_demand(const OntologySchema& schema, const Demand& demand) {
  if (auto v = validate_demand(schema, demand); !v.empty()) throw DemandError(std::move(v));
}

// ---------------------------------------------------------------------------
// Scoring

namespace {

enum class ConceptVerdict : std::int8_t { unknown = -1, neutral = 0, conflict = 1, potential = 2 };

ConceptVerdict judge_concept(const Taxonomy& t, ClassId supply, ClassId demand, ComparisonCache& cache) {
  if (cache.disjoint(t, supply, demand)) return ConceptVerdict::conflict;
  if (cache.not_among(t, supply, demand)) return ConceptVerdict::potential;
  return ConceptVerdict::neutral;
}

bool constrained(const Demand& demand, const std::string& property) {
  for (const auto& c : demand.constraints)
    if (c.property == property) return true;
  return false;
}

// Concept verdict already applied; adds constraint and elicitation counters.
void score_properties(const Demand& demand, const Instance& supply, RawMatch& r) {
  for (const auto& c : demand.constraints) {
    auto it = supply.values.find(c.property);
    if (it == supply.values.end()) {
      r.n_pot += 1;
      continue;
    }
    const auto& vals = it->second;
    const bool ok = std::any_of(vals.begin(), vals.end(), [&](const Value& v) { return satisfies(c, v); });
    if (!ok) r.n_par += c.weight();
  }
  for (const auto& [name, _] : supply.values) {
    if (!constrained(demand, name)) r.additional_properties.push_back(name);
  }
  r.n_add = static_cast<std::uint32_t>(r.additional_properties.size());
}

void apply_concept(ConceptVerdict v, const Demand& demand, RawMatch& r) {
  if (v == ConceptVerdict::conflict) r.n_par += demand.concept_confidence / 10.0;
  if (v == ConceptVerdict::potential) r.n_pot += 1;
}

ClassId demand_class(const Taxonomy& t, const Demand& demand) {
  auto id = t.find(demand.concept_name);
  if (!id) throw SchemaMismatch("demanded concept '" + demand.concept_name + "' is not in the taxonomy");
  return *id;
}

ClassId supply_class(const Taxonomy& t, const Instance& supply) {
  auto id = t.find(supply.class_name);
  if (!id) throw SchemaMismatch("supply '" + supply.id + "' has class '" + supply.class_name + "' outside the taxonomy");
  return *id;
}

}  // namespace

RawMatch match_one(const Taxonomy& taxonomy, const Demand& demand, const Instance& supply, ComparisonCache& cache) {
  const ClassId wanted = demand_class(taxonomy, demand);
  RawMatch r;
  r.instance_id = supply.id;
  apply_concept(judge_concept(taxonomy, supply_class(taxonomy, supply), wanted, cache), demand, r);
  score_properties(demand, supply, r);
  return r;
}

std::vector<RawMatch> score_supplies(const Taxonomy& taxonomy, const Demand& demand,
                                     std::span<const Instance> supplies, ComparisonCache& cache) {
  std::vector<RawMatch> raw;
  raw.reserve(supplies.size());
  for (const auto& s : supplies) raw.push_back(match_one(taxonomy, demand, s, cache));
  return raw;
}

std::vector<RawMatch> score_supplies_parallel(const Taxonomy& taxonomy, const Demand& demand,
                                              std::span<const Instance> supplies) {
  const ClassId wanted = demand_class(taxonomy, demand);
  ComparisonCache cache;
  std::vector<ConceptVerdict> verdicts(taxonomy.size(), ConceptVerdict::unknown);
  std::vector<ClassId> classes(supplies.size());
  for (std::size_t i = 0; i < supplies.size(); ++i) {
    const ClassId c = supply_class(taxonomy, supplies[i]);
    classes[i] = c;
    if (verdicts[c] == ConceptVerdict::unknown) verdicts[c] = judge_concept(taxonomy, c, wanted, cache);
  }

  std::vector<RawMatch> raw(supplies.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(supplies.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      RawMatch& r = raw[i];
      r.instance_id = supplies[i].id;
      apply_concept(verdicts[classes[i]], demand, r);
      score_properties(demand, supplies[i], r);
    } catch (...) {
#pragma omp critical(ontomatch_score_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return raw;
}

double unified_rank(double rank_par, double rank_pot, double rank_add, bool add_present) {
  return (rank_par + rank_pot + (add_present ? 1.0 - rank_add : 0.0)) / 3.0;
}

std::vector<MatchScore> normalize_ranks(std::span<const RawMatch> raw) {
  double max_par = 0, max_pot = 0;
  std::uint32_t max_add = 0;
  for (const auto& r : raw) {
    max_par = std::max(max_par, r.n_par);
    max_pot = std::max(max_pot, r.n_pot);
    max_add = std::max(max_add, r.n_add);
  }
  std::vector<MatchScore> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    MatchScore s;
    s.instance_id = r.instance_id;
    s.n_par = r.n_par;
    s.n_pot = r.n_pot;
    s.n_add = r.n_add;
    s.additional_properties = r.additional_properties;
    s.rank_par = max_par != 0 ? r.n_par / max_par : 0.0;
    s.rank_pot = max_pot != 0 ? r.n_pot / max_pot : 0.0;
    s.rank_add = max_add != 0 ? static_cast<double>(r.n_add) / max_add : 0.0;
    s.rank = unified_rank(s.rank_par, s.rank_pot, s.rank_add, max_add != 0);
    out.push_back(std::move(s));
  }
  return out;
}

void sort_by_rank(std::vector<MatchScore>& scores) {
  std::stable_sort(scores.begin(), scores.end(), [](const MatchScore& a, const MatchScore& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.instance_id < b.instance_id;
  });
}

std::vector<MatchScore> match_all(const Taxonomy& taxonomy, const Demand& demand,
                                  std::span<const Instance> supplies, ComparisonCache& cache) {
  auto raw = score_supplies(taxonomy, demand, supplies, cache);
  auto scores = normalize_ranks(raw);
  sort_by_rank(scores);
  return scores;
}

std::vector<MatchScore> match_all(const Taxonomy& taxonomy, const Demand& demand,
                                  std::span<const Instance> supplies) {
  ComparisonCache cache;
  return match_all(taxonomy, demand, supplies, cache);
}

std::vector<MatchScore> match_all_parallel(const Taxonomy& taxonomy, const Demand& demand,
                                           std::span<const Instance> supplies) {
  auto raw = score_supplies_parallel(taxonomy, demand, supplies);
  auto scores = normalize_ranks(raw);
  sort_by_rank(scores);
  return scores;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Value operand(const json& j, const std::string& where) {
  try {
    return value_from_json(j);
  } catch (const TypeMismatch& e) {
    detail::malformed(where, e.what());
  }
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  detail::string_array(j, key, key, [&](std::string s) { out.push_back(std::move(s)); });
  return out;
}

double number(const json& j, const char* key) {
  const json& v = detail::required(j, key, "match");
  if (!v.is_number()) detail::malformed("match", std::string("'") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

Demand demand_from_json(const json& j) {
  detail::check_keys(j, {"concept", "concept_confidence", "constraints", "ontology_uri"}, "demand");
  Demand d;
  d.concept_name = detail::required_string(j, "concept", "demand");
  d.concept_confidence = detail::optional_confidence(j, "concept_confidence", "demand");
  d.ontology_uri = detail::required_string(j, "ontology_uri", "demand");
  if (auto it = j.find("constraints"); it != j.end()) {
    if (!it->is_array()) detail::malformed("demand", "'constraints' must be an array");
    for (const auto& cj : *it) {
      detail::check_keys(cj, {"property", "op", "value", "confidence"}, "constraint");
      Constraint c;
      c.property = detail::required_string(cj, "property", "constraint");
      const std::string op = detail::required_string(cj, "op", c.property);
      auto parsed = constraint_op_from_string(op);
      if (!parsed) detail::malformed(c.property, "unknown operator '" + op + "'");
      c.op = *parsed;
      const json& v = detail::required(cj, "value", c.property);
      if (c.op == ConstraintOp::range) {
        if (!v.is_array() || v.size() != 2) detail::malformed(c.property, "range value must be [low, high]");
        c.value = operand(v[0], c.property);
        c.upper = operand(v[1], c.property);
      } else {
        c.value = operand(v, c.property);
      }
      c.confidence = detail::optional_confidence(cj, "confidence", c.property);
      d.constraints.push_back(std::move(c));
    }
  }
  return d;
}

json demand_to_json(const Demand& d) {
  json cs = json::array();
  for (const auto& c : d.constraints) {
    json v = c.upper ? json::array({value_to_json(c.value), value_to_json(*c.upper)}) : value_to_json(c.value);
    cs.push_back({{"property", c.property}, {"op", to_string(c.op)}, {"value", std::move(v)}, {"confidence", c.confidence}});
  }
  return {{"concept", d.concept_name},
          {"concept_confidence", d.concept_confidence},
          {"constraints", std::move(cs)},
          {"ontology_uri", d.ontology_uri}};
}

json raw_to_json(const RawMatch& r) {
  return {{"instance_id", r.instance_id},
          {"n_par", r.n_par},
          {"n_pot", r.n_pot},
          {"n_add", r.n_add},
          {"additional_properties", r.additional_properties}};
}

RawMatch raw_from_json(const json& j) {
  detail::expect_object(j, "match");
  RawMatch r;
  r.instance_id = detail::required_string(j, "instance_id", "match");
  r.n_par = number(j, "n_par");
  r.n_pot = number(j, "n_pot");
  r.n_add = static_cast<std::uint32_t>(number(j, "n_add"));
  r.additional_properties = string_list(j, "additional_properties");
  return r;
}

json score_to_json(const MatchScore& s) {
  return {{"instance_id", s.instance_id},
          {"n_par", s.n_par},
          {"n_pot", s.n_pot},
          {"n_add", s.n_add},
          {"additional_properties", s.additional_properties},
          {"rank_par", s.rank_par},
          {"rank_pot", s.rank_pot},
          {"rank_add", s.rank_add},
          {"rank", s.rank}};
}

MatchScore score_from_json(const json& j) {
  RawMatch r = raw_from_json(j);
  MatchScore s;
  s.instance_id = r.instance_id;
  s.n_par = r.n_par;
  s.n_pot = r.n_pot;
  s.n_add = r.n_add;
  s.additional_properties = std::move(r.additional_properties);
  s.rank_par = number(j, "rank_par");
  s.rank_pot = number(j, "rank_pot");
  s.rank_add = number(j, "rank_add");
  s.rank = number(j, "rank");
  return s;
}

}  // namespace ontomatch
