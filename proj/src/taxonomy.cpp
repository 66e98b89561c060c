#include "ontomatch/taxonomy.hpp"

#include <algorithm>
#include <numeric>

namespace ontomatch {

UnknownClass::UnknownClass(std::string_view name)
    : std::out_of_range("unknown class '" + std::string(name) + "'") {}

InconsistentTaxonomy::InconsistentTaxonomy(const std::string& klass, const std::string& detail)
    : std::runtime_error("inconsistent taxonomy at '" + klass + "': " + detail), class_(klass) {}

bool BitRelation::merge_row(std::size_t i, std::size_t j) {
  bool changed = false;
  std::uint64_t* dst = &bits_[i * words_];
  const std::uint64_t* src = &bits_[j * words_];
  for (std::size_t w = 0; w < words_; ++w) {
    const std::uint64_t next = dst[w] | src[w];
    changed = changed || next != dst[w];
    dst[w] = next;
  }
  return changed;
}

std::optional<ClassId> Taxonomy::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ClassId Taxonomy::id(std::string_view name) const {
  auto found = find(name);
  if (!found) throw UnknownClass(name);
  return *found;
}

std::vector<std::vector<std::string>> Taxonomy::equivalence_groups() const {
  std::map<ClassId, std::vector<std::string>> groups;
  for (ClassId c = 0; c < size(); ++c) groups[representative_[c]].push_back(names_[c]);
  std::vector<std::vector<std::string>> out;
  for (auto& [_, g] : groups) {
    std::sort(g.begin(), g.end());
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Taxonomy::same_relations(const Taxonomy& other) const {
  if (names_.size() != other.names_.size()) return false;
  for (ClassId a = 0; a < size(); ++a) {
    const ClassId oa = other.id(names_[a]);
    for (ClassId b = 0; b < size(); ++b) {
      const ClassId ob = other.id(names_[b]);
      if (subsumes(a, b) != other.subsumes(oa, ob) || disjoint(a, b) != other.disjoint(oa, ob)) return false;
    }
  }
  return true;
}

namespace {

struct UnionFind {
  std::vector<ClassId> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), ClassId{0}); }
  ClassId find(ClassId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(ClassId a, ClassId b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Taxonomy build_taxonomy(const OntologySchema& schema) {
  Taxonomy t;
  const std::size_t n = schema.classes.size();
  for (const auto& c : schema.classes) {
    t.index_.emplace(c.name, static_cast<ClassId>(t.names_.size()));
    t.names_.push_back(c.name);
  }

  // Declared subclass edges; reachability among classes.
  BitRelation reach(n);
  UnionFind uf(n);
  for (ClassId c = 0; c < n; ++c) reach.set(c, c);
  for (const auto& c : schema.classes) {
    const ClassId a = t.id(c.name);
    for (const auto& e : c.equivalent_to) {
      const ClassId b = t.id(e);
      uf.unite(a, b);
      reach.set(a, b);
      reach.set(b, a);
    }
    for (const auto& s : c.subclass_of) reach.set(a, t.id(s));
  }
  // Warshall over rows: if a reaches k, a reaches everything k reaches.
  for (ClassId k = 0; k < n; ++k)
    for (ClassId a = 0; a < n; ++a)
      if (reach.test(a, k)) reach.merge_row(a, k);

  // Mutual reachability (declared equivalence or subclass cycles) is equivalence.
  for (ClassId a = 0; a < n; ++a)
    for (ClassId b = a + 1; b < n; ++b)
      if (reach.test(a, b) && reach.test(b, a)) uf.unite(a, b);
  t.representative_.resize(n);
  for (ClassId c = 0; c < n; ++c) t.representative_[c] = uf.find(c);
  t.subsumption_ = std::move(reach);

  // Disjointness: declared pairs pushed down to every subsumee on both sides.
  t.disjointness_ = BitRelation(n);
  std::vector<std::vector<ClassId>> below(n);
  for (ClassId sub = 0; sub < n; ++sub)
    for (ClassId sup = 0; sup < n; ++sup)
      if (t.subsumption_.test(sub, sup)) below[sup].push_back(sub);
  for (const auto& c : schema.classes) {
    const ClassId a = t.id(c.name);
    for (const auto& d : c.disjoint_with) {
      const ClassId b = t.id(d);
      for (ClassId x : below[a])
        for (ClassId y : below[b]) {
          t.disjointness_.set(x, y);
          t.disjointness_.set(y, x);
        }
    }
  }

  // A class disjoint with one of its subsumers ends up disjoint with itself.
  for (ClassId c = 0; c < n; ++c) {
    if (!t.disjointness_.test(c, c)) continue;
    std::string why = "class is disjoint with itself";
    for (ClassId sup = 0; sup < n; ++sup) {
      if (sup != c && t.subsumption_.test(c, sup) && t.disjointness_.test(c, sup)) {
        why = "class is disjoint with its subsumer '" + t.names_[sup] + "'";
        break;
      }
    }
    throw InconsistentTaxonomy(t.names_[c], why);
  }
  return t;
}

}  // namespace ontomatch
