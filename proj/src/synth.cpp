#include "ontomatch/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace ontomatch {

namespace {

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
  return buf;
}

std::string instance_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "r%05zu", i);
  return buf;
}

constexpr ValueType kDatatypeCycle[] = {ValueType::integer, ValueType::decimal, ValueType::text, ValueType::boolean};
constexpr std::size_t kVocabulary = 8;

std::string word(std::size_t i) { return "w" + std::to_string(i); }

bool is_ancestor(const std::vector<std::size_t>& parent, std::size_t a, std::size_t b) {
  for (std::size_t x = b; x != 0; x = parent[x])
    if (parent[x] == a) return true;
  return false;
}

}  // namespace

const std::vector<OntologyProfile>& reference_profiles() {
  static const std::vector<OntologyProfile> profiles = {
      {"computer", 13, 6, 0},
      {"books", 9, 2, 13},
      {"doc-egov", 22, 10, 67},
      {"wine", 80, 12, 9},
  };
  return profiles;
}

std::optional<OntologyProfile> find_profile(std::string_view name) {
  const std::string key = lowercase(name);
  for (const auto& p : reference_profiles())
    if (p.name == key) return p;
  return std::nullopt;
}

OntologyDocument generate_ontology(const OntologyProfile& profile, std::size_t instances, std::uint64_t seed) {
  if (profile.classes == 0) throw std::invalid_argument("profile needs at least one class");
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  OntologyDocument doc;
  doc.schema.uri = "http://example.org/synthetic/" + profile.name;
  doc.schema.keywords = {profile.name, "synthetic"};

  std::vector<std::size_t> parent(profile.classes, 0);
  for (std::size_t i = 0; i < profile.classes; ++i) {
    ClassDef c{numbered("Class", i), {}, {}, {}};
    if (i > 0) {
      parent[i] = pick(i);
      c.subclass_of.insert(numbered("Class", parent[i]));
    }
    doc.schema.classes.push_back(std::move(c));
  }
  // Disjoint pairs only between classes on different branches.
  for (std::size_t n = 0; n < profile.classes / 4; ++n) {
    const std::size_t a = pick(profile.classes), b = pick(profile.classes);
    if (a == b || a == 0 || b == 0 || is_ancestor(parent, a, b) || is_ancestor(parent, b, a)) continue;
    doc.schema.classes[a].disjoint_with.insert(numbered("Class", b));
  }

  for (std::size_t i = 0; i < profile.object_properties; ++i) {
    PropertyDef p;
    p.name = numbered("link", i);
    p.kind = PropertyKind::object;
    p.range_class = numbered("Class", pick(profile.classes));
    doc.schema.properties.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < profile.datatype_properties; ++i) {
    PropertyDef p;
    p.name = numbered("attr", i);
    p.datatype = kDatatypeCycle[i % 4];
    p.functional = true;
    doc.schema.properties.push_back(std::move(p));
  }

  std::bernoulli_distribution asserted(0.6);
  std::uniform_int_distribution<std::int64_t> integer(0, 1000);
  std::uniform_int_distribution<int> cents(0, 100000);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < instances; ++i) {
    Instance inst;
    inst.id = instance_name(i);
    inst.class_name = numbered("Class", pick(profile.classes));
    for (const auto& p : doc.schema.properties) {
      if (!asserted(rng)) continue;
      Value v;
      if (p.kind == PropertyKind::object) {
        v = instance_name(pick(std::max<std::size_t>(instances, 1)));
      } else {
        switch (p.datatype) {
          case ValueType::integer: v = integer(rng); break;
          case ValueType::decimal: v = cents(rng) / 100.0; break;
          case ValueType::text: v = word(pick(kVocabulary)); break;
          case ValueType::boolean: v = coin(rng); break;
        }
      }
      inst.values[p.name].push_back(std::move(v));
    }
    doc.instances.push_back(std::move(inst));
  }
  return doc;
}

Demand generate_demand(const OntologySchema& schema, std::size_t property_count, std::uint64_t seed) {
  if (schema.classes.empty()) throw std::invalid_argument("schema declares no classes");
  if (property_count > schema.properties.size())
    throw std::invalid_argument("schema declares only " + std::to_string(schema.properties.size()) + " properties");
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  Demand d;
  d.concept_name = schema.classes[pick(schema.classes.size())].name;
  d.ontology_uri = schema.uri;

  std::vector<std::size_t> order(schema.properties.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  // Operands are drawn in property order so that prefixes stay stable.
  for (std::size_t k = 0; k < property_count; ++k) {
    const PropertyDef& p = schema.properties[order[k]];
    Constraint c;
    c.property = p.name;
    c.confidence = 10;
    if (p.kind == PropertyKind::object) {
      c.op = ConstraintOp::eq;
      c.value = instance_name(pick(1000));
    } else {
      switch (p.datatype) {
        case ValueType::integer:
          c.op = ConstraintOp::ge;
          c.value = static_cast<std::int64_t>(pick(1001));
          break;
        case ValueType::decimal:
          c.op = ConstraintOp::le;
          c.value = static_cast<double>(pick(1001));
          break;
        case ValueType::text:
          c.op = ConstraintOp::eq;
          c.value = word(pick(kVocabulary));
          break;
        case ValueType::boolean:
          c.op = ConstraintOp::eq;
          c.value = true;
          break;
      }
    }
    d.constraints.push_back(std::move(c));
  }
  return d;
}

}  // namespace ontomatch
