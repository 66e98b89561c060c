#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ontomatch/peer_net.hpp"
#include "ontomatch/synth.hpp"

namespace ontomatch {

struct BenchSpec {
  OntologyProfile profile;
  std::size_t instance_count = 1000;
  std::vector<std::size_t> query_properties{1, 2, 3, 4};
  std::size_t peers = 0;  // 0 = centralized, in-process matching
  FanoutMode mode = FanoutMode::sync;
  std::size_t repetitions = 3;  // measured runs after one warm-up
  std::size_t queries_per_point = 1;  // distinct demands averaged per property count
  std::uint64_t seed = 42;
  std::vector<int> inject_delay_ms;  // per peer, cycled; empty = none
  bool parallel_scoring = false;
};

/// Throws std::invalid_argument naming the first broken invariant.
void validate_bench_spec(const BenchSpec& spec);

struct BenchRow {
  std::string query;
  std::size_t properties = 0;
  std::size_t peers = 0;
  std::size_t resources = 0;  // results returned over all peers
  double matchmaking_ms = 0;
  double latency_ms = 0;
  double total_ms = 0;
};

/// Matchmaking time is the scoring of every supply, the quantity providers
/// report. Centralized rows have latency 0 and a total that adds ranking.
/// Distributed rows report the sum over peers in sync mode and the slowest
/// peer in async mode, so total is close to matchmaking + latency in both.
/// Measurements cycle through the series once per query so that drift hits
/// every property count alike.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

struct LocalTiming {
  double matchmaking_ms = 0;  // score_supplies
  double total_ms = 0;        // scoring plus normalization and ordering
};

/// Mean over `runs` fresh-cache runs after one warm-up.
LocalTiming time_local_match(const Taxonomy& taxonomy, const Demand& demand, std::span<const Instance> supplies,
                             std::size_t runs, bool parallel);

std::string bench_csv(const std::vector<BenchRow>& rows);
std::string bench_table(const std::vector<BenchRow>& rows);

}  // namespace ontomatch
