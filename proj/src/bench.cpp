#include "ontomatch/bench.hpp"

#include <chrono>
#include <memory>
#include <cstdio>
#include <stdexcept>

namespace ontomatch {

namespace {

using Clock = std::chrono::steady_clock;

std::string label(std::size_t index, std::size_t properties, std::size_t peers) {
  return "Q" + std::to_string(index + 1) + "-" + std::to_string(properties) + "-" + std::to_string(peers);
}

}  // namespace

void validate_bench_spec(const BenchSpec& s) {
  if (s.profile.classes == 0) throw std::invalid_argument("profile needs at least one class");
  if (s.profile.object_properties + s.profile.datatype_properties == 0)
    throw std::invalid_argument("profile needs at least one property");
  if (s.instance_count == 0) throw std::invalid_argument("instance count must be positive");
  if (s.query_properties.empty()) throw std::invalid_argument("query series is empty");
  for (auto k : s.query_properties) {
    if (k == 0) throw std::invalid_argument("every query needs at least one property");
    if (k > s.profile.object_properties + s.profile.datatype_properties)
      throw std::invalid_argument("query asks for " + std::to_string(k) + " properties; the profile has fewer");
  }
  if (s.repetitions < 2) throw std::invalid_argument("repetitions must be at least 2");
  if (s.queries_per_point == 0) throw std::invalid_argument("queries per point must be positive");
  for (int d : s.inject_delay_ms)
    if (d < 0) throw std::invalid_argument("injected delays must be non-negative");
  if (!s.inject_delay_ms.empty() && s.peers == 0)
    throw std::invalid_argument("injected delays need distributed mode (peers > 0)");
}

LocalTiming time_local_match(const Taxonomy& taxonomy, const Demand& demand, std::span<const Instance> supplies,
                             std::size_t runs, bool parallel) {
  auto once = [&](LocalTiming* t) {
    const auto start = Clock::now();
    std::vector<RawMatch> raw;
    if (parallel) {
      raw = score_supplies_parallel(taxonomy, demand, supplies);
    } else {
      ComparisonCache cache;
      raw = score_supplies(taxonomy, demand, supplies, cache);
    }
    const auto scored = Clock::now();
    auto scores = normalize_ranks(raw);
    sort_by_rank(scores);
    if (t) {
      t->matchmaking_ms += std::chrono::duration<double, std::milli>(scored - start).count();
      t->total_ms += std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
  };
  once(nullptr);
  LocalTiming t;
  for (std::size_t r = 0; r < runs; ++r) once(&t);
  t.matchmaking_ms /= static_cast<double>(runs);
  t.total_ms /= static_cast<double>(runs);
  return t;
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  validate_bench_spec(spec);
  OntologyDocument doc = generate_ontology(spec.profile, spec.instance_count, spec.seed);
  const std::size_t peers_column = spec.peers == 0 ? 1 : spec.peers;
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < spec.query_properties.size(); ++i)
    rows.push_back({label(i, spec.query_properties[i], peers_column), spec.query_properties[i], peers_column, 0});
  auto demand_for = [&](std::size_t q, std::size_t i) {
    return generate_demand(doc.schema, spec.query_properties[i], spec.seed + q);
  };
  const auto samples = static_cast<double>(spec.queries_per_point);

  if (spec.peers == 0) {
    const Taxonomy taxonomy = build_taxonomy(doc.schema);
    for (std::size_t q = 0; q < spec.queries_per_point; ++q) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const LocalTiming t = time_local_match(taxonomy, demand_for(q, i), doc.instances, spec.repetitions,
                                               spec.parallel_scoring);
        rows[i].matchmaking_ms += t.matchmaking_ms / samples;
        rows[i].total_ms += t.total_ms / samples;
        rows[i].resources = doc.instances.size();
      }
    }
    return rows;
  }

  std::vector<std::vector<Instance>> shards(spec.peers);
  for (std::size_t i = 0; i < doc.instances.size(); ++i) shards[i % spec.peers].push_back(doc.instances[i]);

  std::vector<std::unique_ptr<ProviderNode>> nodes;
  FanoutPlan plan;
  plan.mode = spec.mode;
  plan.per_request_timeout_ms = 60000;
  for (std::size_t p = 0; p < spec.peers; ++p) {
    ProviderConfig cfg{"peer" + std::to_string(p + 1), true, spec.parallel_scoring};
    nodes.push_back(std::make_unique<ProviderNode>(OntologyDocument{doc.schema, std::move(shards[p])}, cfg));
    const std::string address = "127.0.0.1:" + std::to_string(nodes.back()->start("127.0.0.1", 0));
    plan.providers.push_back(address);
    plan.known_fingerprints[address] = nodes.back()->fingerprint();
    if (!spec.inject_delay_ms.empty()) plan.inject_delay_ms[address] = spec.inject_delay_ms[p % spec.inject_delay_ms.size()];
  }

  const auto runs = static_cast<double>(spec.repetitions) * samples;
  for (std::size_t q = 0; q < spec.queries_per_point; ++q) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Demand demand = demand_for(q, i);
      BenchRow& row = rows[i];
      fanout(plan, demand);
      for (std::size_t r = 0; r < spec.repetitions; ++r) {
        const FanoutResult result = fanout(plan, demand);
        if (!result.failures.empty()) throw std::runtime_error("peer failed: " + result.failures.front().error);
        double mm = 0, lat = 0;
        if (spec.mode == FanoutMode::sync) {
          for (const auto& t : result.timing.per_provider) {
            mm += t.matchmaking_ms;
            lat += t.latency_ms;
          }
        } else {
          const ProviderTiming* slowest = &result.timing.per_provider.front();
          for (const auto& t : result.timing.per_provider)
            if (t.wall_ms > slowest->wall_ms) slowest = &t;
          mm = slowest->matchmaking_ms;
          lat = slowest->latency_ms;
        }
        row.matchmaking_ms += mm / runs;
        row.latency_ms += lat / runs;
        row.total_ms += result.timing.total_wall_ms / runs;
        row.resources = result.merged.size();
      }
    }
  }
  for (auto& node : nodes) node->stop();
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "query,properties,peers,resources,matchmaking_ms,latency_ms,total_ms\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%.4f,%.4f,%.4f\n", r.query.c_str(), r.properties, r.peers,
                  r.resources, r.matchmaking_ms, r.latency_ms, r.total_ms);
    out += buf;
  }
  return out;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %6s %6s %9s %14s %11s %10s\n", "query", "props", "peers", "resources",
                "matchmaking_ms", "latency_ms", "total_ms");
  std::string out = buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %6zu %6zu %9zu %14.3f %11.3f %10.3f\n", r.query.c_str(), r.properties,
                  r.peers, r.resources, r.matchmaking_ms, r.latency_ms, r.total_ms);
    out += buf;
  }
  return out;
}

}  // namespace ontomatch
