#include "oracles.hpp"

#include <algorithm>
#include <tuple>

namespace oracle {

// ---------------------------------------------------------------------------
// Taxonomy

bool BruteTaxonomy::subsumes(const std::string& sub, const std::string& sup) const {
  auto it = supers.find(sub);
  return it != supers.end() && it->second.count(sup) > 0;
}

bool BruteTaxonomy::equivalent(const std::string& a, const std::string& b) const {
  return subsumes(a, b) && subsumes(b, a);
}

bool BruteTaxonomy::disjoint(const std::string& a, const std::string& b) const {
  for (const auto& [x, y] : declared_disjoint) {
    if (subsumes(a, x) && subsumes(b, y)) return true;
    if (subsumes(a, y) && subsumes(b, x)) return true;
  }
  return false;
}

BruteTaxonomy brute_taxonomy(const OntologySchema& schema) {
  BruteTaxonomy t;
  std::vector<std::pair<std::string, std::string>> edges;  // sub, sup
  for (const auto& c : schema.classes) {
    t.supers[c.name].insert(c.name);
    for (const auto& s : c.subclass_of) edges.emplace_back(c.name, s);
    for (const auto& e : c.equivalent_to) {
      edges.emplace_back(c.name, e);
      edges.emplace_back(e, c.name);
    }
    for (const auto& d : c.disjoint_with) t.declared_disjoint.emplace(c.name, d);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [sub, sup] : edges) {
      auto& target = t.supers[sub];
      const auto before = target.size();
      const auto inherited = t.supers[sup];
      target.insert(inherited.begin(), inherited.end());
      target.insert(sup);
      changed = changed || target.size() != before;
    }
  }
  for (const auto& c : schema.classes)
    if (t.disjoint(c.name, c.name)) t.inconsistent = true;
  return t;
}

// ---------------------------------------------------------------------------
// Matching

namespace {

double as_double(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

bool numeric(const Value& v) { return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v); }

// -1, 0, 1 for the ordered value spaces used by the generators.
int order(const Value& a, const Value& b) {
  if (numeric(a) && numeric(b)) {
    const double x = as_double(a), y = as_double(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  const auto& x = std::get<std::string>(a);
  const auto& y = std::get<std::string>(b);
  return x < y ? -1 : (x > y ? 1 : 0);
}

bool equal(const Value& a, const Value& b) {
  if (std::holds_alternative<bool>(a) || std::holds_alternative<bool>(b)) return a == b;
  return order(a, b) == 0;
}

bool holds(const Constraint& c, const Value& v) {
  switch (c.op) {
    case ConstraintOp::eq: return equal(v, c.value);
    case ConstraintOp::ne: return !equal(v, c.value);
    case ConstraintOp::lt: return order(v, c.value) < 0;
    case ConstraintOp::le: return order(v, c.value) <= 0;
    case ConstraintOp::gt: return order(v, c.value) > 0;
    case ConstraintOp::ge: return order(v, c.value) >= 0;
    case ConstraintOp::range: return order(v, c.value) >= 0 && order(v, *c.upper) <= 0;
  }
  return false;
}

}  // namespace

RawMatch naive_raw(const BruteTaxonomy& t, const Demand& demand, const Instance& supply) {
  RawMatch r;
  r.instance_id = supply.id;
  if (t.disjoint(supply.class_name, demand.concept_name)) {
    r.n_par += demand.concept_confidence / 10.0;
  } else if (!t.subsumes(supply.class_name, demand.concept_name)) {
    r.n_pot += 1;
  }
  std::set<std::string> named;
  for (const auto& c : demand.constraints) {
    named.insert(c.property);
    auto it = supply.values.find(c.property);
    if (it == supply.values.end() || it->second.empty()) {
      r.n_pot += 1;
      continue;
    }
    bool any = false;
    for (const auto& v : it->second) any = any || holds(c, v);
    if (!any) r.n_par += c.confidence / 10.0;
  }
  std::set<std::string> extra;
  for (const auto& [name, values] : supply.values)
    if (!values.empty() && !named.count(name)) extra.insert(name);
  r.additional_properties.assign(extra.begin(), extra.end());
  r.n_add = static_cast<std::uint32_t>(extra.size());
  return r;
}

std::vector<MatchScore> naive_match_all(const BruteTaxonomy& t, const Demand& demand,
                                        const std::vector<Instance>& supplies) {
  std::vector<RawMatch> raw;
  for (const auto& s : supplies) raw.push_back(naive_raw(t, demand, s));
  double max_par = 0, max_pot = 0, max_add = 0;
  for (const auto& r : raw) {
    if (r.n_par > max_par) max_par = r.n_par;
    if (r.n_pot > max_pot) max_pot = r.n_pot;
    if (r.n_add > max_add) max_add = r.n_add;
  }
  std::vector<MatchScore> out;
  for (const auto& r : raw) {
    MatchScore s;
    s.instance_id = r.instance_id;
    s.n_par = r.n_par;
    s.n_pot = r.n_pot;
    s.n_add = r.n_add;
    s.additional_properties = r.additional_properties;
    s.rank_par = max_par == 0 ? 0 : r.n_par / max_par;
    s.rank_pot = max_pot == 0 ? 0 : r.n_pot / max_pot;
    s.rank_add = max_add == 0 ? 0 : r.n_add / max_add;
    const double bonus = max_add == 0 ? 0 : 1 - s.rank_add;
    s.rank = (s.rank_par + s.rank_pot + bonus) / 3;
    out.push_back(s);
  }
  // Insertion sort keeps the oracle free of library ordering helpers.
  for (std::size_t i = 1; i < out.size(); ++i) {
    for (std::size_t j = i; j > 0; --j) {
      const auto& a = out[j - 1];
      const auto& b = out[j];
      const bool swap = b.rank < a.rank || (b.rank == a.rank && b.instance_id < a.instance_id);
      if (!swap) break;
      std::swap(out[j - 1], out[j]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string cls(std::size_t i) { return "C" + std::to_string(i); }

Value random_value(std::mt19937_64& rng, const PropertyDef& p) {
  if (p.kind == PropertyKind::object) return "o" + std::to_string(uniform(rng, 1, 3));
  switch (p.datatype) {
    case ValueType::integer: return static_cast<std::int64_t>(uniform(rng, 0, 5));
    case ValueType::decimal: return static_cast<double>(uniform(rng, 0, 10)) / 2.0;
    case ValueType::text: return std::string(1, static_cast<char>('a' + uniform(rng, 0, 2)));
    case ValueType::boolean: return chance(rng, 0.5);
  }
  return std::int64_t{0};
}

}  // namespace

OntologySchema random_schema(std::mt19937_64& rng, std::size_t max_classes, std::size_t max_properties) {
  OntologySchema s;
  s.uri = "http://example.org/random";
  s.keywords = {"random"};
  const std::size_t n = uniform(rng, 1, max_classes);
  for (std::size_t i = 0; i < n; ++i) s.classes.push_back({cls(i), {}, {}, {}});
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const std::size_t parents = uniform(rng, 0, 2);
    for (std::size_t k = 0; k < parents; ++k) {
      const std::size_t j = uniform(rng, 0, n - 1);
      if (j != i) s.classes[i].subclass_of.insert(cls(j));
    }
    if (chance(rng, 0.1)) {
      const std::size_t j = uniform(rng, 0, n - 1);
      if (j != i) s.classes[i].equivalent_to.insert(cls(j));
    }
    if (chance(rng, 0.25)) {
      const std::size_t j = uniform(rng, 0, n - 1);
      if (j != i) s.classes[i].disjoint_with.insert(cls(j));
    }
  }
  const std::size_t m = uniform(rng, 1, max_properties);
  constexpr ValueType kTypes[] = {ValueType::integer, ValueType::decimal, ValueType::text, ValueType::boolean};
  for (std::size_t i = 0; i < m; ++i) {
    PropertyDef p;
    p.name = "p" + std::to_string(i);
    if (chance(rng, 0.2)) {
      p.kind = PropertyKind::object;
      p.range_class = cls(uniform(rng, 0, n - 1));
    } else {
      p.datatype = kTypes[uniform(rng, 0, 3)];
    }
    p.functional = chance(rng, 0.5);
    s.properties.push_back(std::move(p));
  }
  return s;
}

Instance random_instance(std::mt19937_64& rng, const OntologySchema& schema, const std::string& id) {
  Instance inst;
  inst.id = id;
  inst.class_name = schema.classes[uniform(rng, 0, schema.classes.size() - 1)].name;
  for (const auto& p : schema.properties) {
    if (!chance(rng, 0.6)) continue;
    const std::size_t count = p.single_valued() ? 1 : uniform(rng, 1, 2);
    for (std::size_t k = 0; k < count; ++k) inst.values[p.name].push_back(random_value(rng, p));
  }
  return inst;
}

Demand random_demand(std::mt19937_64& rng, const OntologySchema& schema, std::size_t max_constraints) {
  Demand d;
  d.concept_name = schema.classes[uniform(rng, 0, schema.classes.size() - 1)].name;
  d.concept_confidence = static_cast<int>(uniform(rng, 1, 10));
  d.ontology_uri = schema.uri;
  std::vector<std::size_t> order(schema.properties.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t k = uniform(rng, 0, std::min(max_constraints, order.size()));
  for (std::size_t i = 0; i < k; ++i) {
    const PropertyDef& p = schema.properties[order[i]];
    Constraint c;
    c.property = p.name;
    c.confidence = static_cast<int>(uniform(rng, 1, 10));
    c.value = random_value(rng, p);
    const bool numeric_range =
        p.kind == PropertyKind::datatype && (p.datatype == ValueType::integer || p.datatype == ValueType::decimal);
    if (numeric_range) {
      constexpr ConstraintOp kOps[] = {ConstraintOp::eq, ConstraintOp::ne, ConstraintOp::lt, ConstraintOp::le,
                                       ConstraintOp::gt, ConstraintOp::ge, ConstraintOp::range};
      c.op = kOps[uniform(rng, 0, 6)];
      if (c.op == ConstraintOp::range) {
        Value other = random_value(rng, p);
        if (order_of(other, c.value) < 0) std::swap(other, c.value);
        c.upper = other;
      }
    } else {
      c.op = chance(rng, 0.7) ? ConstraintOp::eq : ConstraintOp::ne;
    }
    d.constraints.push_back(std::move(c));
  }
  return d;
}

RandomCase random_case(std::mt19937_64& rng, std::size_t max_classes, std::size_t max_properties,
                       std::size_t max_supplies, std::size_t max_constraints) {
  RandomCase rc;
  do {
    rc.schema = random_schema(rng, max_classes, max_properties);
  } while (brute_taxonomy(rc.schema).inconsistent);
  const std::size_t n = uniform(rng, 0, max_supplies);
  for (std::size_t i = 0; i < n; ++i) rc.supplies.push_back(random_instance(rng, rc.schema, "s" + std::to_string(i)));
  rc.demand = random_demand(rng, rc.schema, max_constraints);
  return rc;
}

int order_of(const Value& a, const Value& b) { return order(a, b); }

// ---------------------------------------------------------------------------
// Registry

void RegistryModel::register_entry(const RegistryEntry& e) { entries[e.ontology_uri] = e; }

bool RegistryModel::deregister(const std::string& uri) { return entries.erase(uri) > 0; }

std::vector<RegistryEntry> RegistryModel::search(const std::set<std::string>& keywords) const {
  std::set<std::string> wanted;
  for (const auto& k : keywords) wanted.insert(lowercase(k));
  std::vector<RegistryEntry> out;
  for (const auto& [_, e] : entries) {
    bool hit = wanted.empty();
    for (const auto& k : e.keywords) hit = hit || wanted.count(k);
    if (hit) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const RegistryEntry& a, const RegistryEntry& b) {
    return std::tie(a.registered_at, a.ontology_uri) < std::tie(b.registered_at, b.ontology_uri);
  });
  return out;
}

// ---------------------------------------------------------------------------
// PUSH

std::vector<std::pair<std::string, std::string>> expected_deliveries(const std::vector<UserProfile>& profiles,
                                                                     const Instance& published,
                                                                     const BruteTaxonomy& t, Timestamp at) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : profiles)
    for (const auto& q : p.saved_queries)
      if (parse_timestamp_or_throw(q.valid_until) >= at && naive_raw(t, q.demand, published).n_par == 0)
        out.emplace_back(p.user_id, q.query_id);
  return out;
}

}  // namespace oracle
