#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontomatch/matchmaker.hpp"
#include "ontomatch/ontology.hpp"

namespace ontomatch {

struct ProvenanceTag {
  std::string provider_id;
  std::string ontology_uri;

  bool operator==(const ProvenanceTag&) const = default;
};

/// A ranked supply ready for display: the score, where it came from, and
/// every value it asserts (the expandable detail).
struct ResultEntry {
  MatchScore score;
  std::optional<ProvenanceTag> provenance;
  std::string class_name;
  PropertyValues detail;

  bool operator==(const ResultEntry&) const = default;
};

enum class GroupOrder { asc, desc };
enum class Strategy { naive, grouping };

std::optional<GroupOrder> group_order_from_string(std::string_view s);
std::optional<Strategy> strategy_from_string(std::string_view s);

struct Group {
  std::vector<std::string> signature;  // sorted additional property names
  std::vector<ResultEntry> members;
};

struct GroupedResults {
  std::vector<Group> groups;
  GroupOrder order_mode = GroupOrder::asc;
};

/// Raw counters of one provider plus the snapshot of each matched supply.
struct ProviderResults {
  ProvenanceTag tag;
  std::string tbox_fingerprint;
  std::vector<RawMatch> results;
  std::vector<Instance> snapshots;  // parallel to results; may be empty
};

class MergeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Naive strategy: keeps match_all order and attaches the asserted values.
std::vector<ResultEntry> render_flat(std::span<const MatchScore> scores, std::span<const Instance> supplies);

/// Grouping strategy: partitions by additional-property signature. Groups
/// are ordered by signature size (per `order`), ties by the joined
/// signature; members keep their input order.
GroupedResults group_by_additional(std::span<const ResultEntry> entries, GroupOrder order = GroupOrder::asc);

/// Sets (or replaces) the provenance of every entry.
std::vector<ResultEntry> annotate_provenance(std::vector<ResultEntry> entries, const ProvenanceTag& tag);

/// Entries partitioned by provider, providers in first-appearance order of
/// `registration_order` (providers not listed follow in order of appearance).
std::vector<std::pair<ProvenanceTag, std::vector<ResultEntry>>> group_by_provider(
    std::span<const ResultEntry> entries, std::span<const ProvenanceTag> registration_order = {});

/// Pools raw counters of all providers and normalizes once over the pooled
/// set. All responses must carry one TBox fingerprint; a repeated
/// (provider, instance) pair is rejected. Sorted by rank, instance id,
/// provider id.
std::vector<ResultEntry> merge_multi_provider(std::span<const ProviderResults> responses);

// Plain-text renderings.
std::string format_entry(const ResultEntry& e);
std::string render_flat_text(std::span<const ResultEntry> entries);
std::string render_groups_text(const GroupedResults& grouped);
std::string render_provider_text(std::span<const ResultEntry> entries,
                                 std::span<const ProvenanceTag> registration_order = {});

json entry_to_json(const ResultEntry& e);
json flat_to_json(std::span<const ResultEntry> entries);
json grouped_to_json(const GroupedResults& grouped);

}  // namespace ontomatch
