// Serial reference vs OpenMP kernel on the reference ontology profiles.

#include <map>

#include <benchmark/benchmark.h>

#include "ontomatch/matchmaker.hpp"
#include "ontomatch/synth.hpp"
#include "ontomatch/taxonomy.hpp"

namespace {

using namespace ontomatch;

struct Fixture {
  OntologyDocument doc;
  Taxonomy taxonomy;
  Demand demand;
};

const Fixture& fixture(std::size_t profile_index, std::size_t properties) {
  static std::map<std::pair<std::size_t, std::size_t>, Fixture> cache;
  auto key = std::make_pair(profile_index, properties);
  auto it = cache.find(key);
  if (it == cache.end()) {
    OntologyDocument doc = generate_ontology(reference_profiles()[profile_index], 5000, 42);
    Taxonomy taxonomy = build_taxonomy(doc.schema);
    Demand demand = generate_demand(doc.schema, properties, 42);
    it = cache.emplace(key, Fixture{std::move(doc), std::move(taxonomy), std::move(demand)}).first;
  }
  return it->second;
}

void BM_MatchAllSerial(benchmark::State& state) {
  const Fixture& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) {
    ComparisonCache cache;
    benchmark::DoNotOptimize(match_all(f.taxonomy, f.demand, f.doc.instances, cache));
  }
  state.SetLabel(reference_profiles()[state.range(0)].name);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.doc.instances.size()));
}

void BM_MatchAllParallel(benchmark::State& state) {
  const Fixture& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(match_all_parallel(f.taxonomy, f.demand, f.doc.instances));
  state.SetLabel(reference_profiles()[state.range(0)].name);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.doc.instances.size()));
}

void profiles_and_properties(benchmark::internal::Benchmark* b) {
  for (int p = 0; p < 4; ++p)
    for (int k = 1; k <= 4; ++k) b->Args({p, k});
}

}  // namespace

BENCHMARK(BM_MatchAllSerial)->Apply(profiles_and_properties)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatchAllParallel)->Apply(profiles_and_properties)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
