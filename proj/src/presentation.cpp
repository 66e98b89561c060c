#include "ontomatch/presentation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace ontomatch {

std::optional<GroupOrder> group_order_from_string(std::string_view s) {
  if (s == "asc") return GroupOrder::asc;
  if (s == "desc") return GroupOrder::desc;
  return std::nullopt;
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
  if (s == "naive") return Strategy::naive;
  if (s == "grouping") return Strategy::grouping;
  return std::nullopt;
}

std::vector<ResultEntry> render_flat(std::span<const MatchScore> scores, std::span<const Instance> supplies) {
  std::unordered_map<std::string_view, const Instance*> by_id;
  for (const auto& s : supplies) by_id.emplace(s.id, &s);
  std::vector<ResultEntry> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    ResultEntry e{s, std::nullopt, {}, {}};
    if (auto it = by_id.find(s.instance_id); it != by_id.end()) {
      e.class_name = it->second->class_name;
      e.detail = it->second->values;
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

GroupedResults group_by_additional(std::span<const ResultEntry> entries, GroupOrder order) {
  GroupedResults out;
  out.order_mode = order;
  std::map<std::vector<std::string>, std::size_t> index;
  for (const auto& e : entries) {
    const auto& sig = e.score.additional_properties;
    auto [it, inserted] = index.emplace(sig, out.groups.size());
    if (inserted) out.groups.push_back(Group{sig, {}});
    out.groups[it->second].members.push_back(e);
  }
  std::stable_sort(out.groups.begin(), out.groups.end(), [order](const Group& a, const Group& b) {
    if (a.signature.size() != b.signature.size()) {
      return order == GroupOrder::asc ? a.signature.size() < b.signature.size()
                                      : a.signature.size() > b.signature.size();
    }
    return join(a.signature, ",") < join(b.signature, ",");
  });
  return out;
}

std::vector<ResultEntry> annotate_provenance(std::vector<ResultEntry> entries, const ProvenanceTag& tag) {
  for (auto& e : entries) e.provenance = tag;
  return entries;
}

std::vector<std::pair<ProvenanceTag, std::vector<ResultEntry>>> group_by_provider(
    std::span<const ResultEntry> entries, std::span<const ProvenanceTag> registration_order) {
  std::vector<std::pair<ProvenanceTag, std::vector<ResultEntry>>> sections;
  auto section_of = [&](const ProvenanceTag& tag) -> std::vector<ResultEntry>& {
    for (auto& s : sections)
      if (s.first.provider_id == tag.provider_id) return s.second;
    sections.emplace_back(tag, std::vector<ResultEntry>{});
    return sections.back().second;
  };
  std::set<std::string> present;
  for (const auto& e : entries)
    if (e.provenance) present.insert(e.provenance->provider_id);
  for (const auto& tag : registration_order)
    if (present.count(tag.provider_id)) section_of(tag);
  for (const auto& e : entries) {
    if (e.provenance) section_of(*e.provenance).push_back(e);
  }
  return sections;
}

std::vector<ResultEntry> merge_multi_provider(std::span<const ProviderResults> responses) {
  if (responses.empty()) return {};
  const std::string& fingerprint = responses.front().tbox_fingerprint;
  for (const auto& r : responses) {
    if (r.tbox_fingerprint != fingerprint)
      throw MergeError("provider '" + r.tag.provider_id + "' serves a different TBox (fingerprint " +
                       r.tbox_fingerprint + " vs " + fingerprint + ")");
  }

  std::vector<RawMatch> pooled;
  std::vector<std::pair<const ProviderResults*, std::size_t>> origin;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : responses) {
    for (std::size_t i = 0; i < r.results.size(); ++i) {
      if (!seen.emplace(r.tag.provider_id, r.results[i].instance_id).second)
        throw MergeError("provider '" + r.tag.provider_id + "' returned instance '" + r.results[i].instance_id +
                         "' twice");
      pooled.push_back(r.results[i]);
      origin.emplace_back(&r, i);
    }
  }

  auto scores = normalize_ranks(pooled);
  std::vector<ResultEntry> out;
  out.reserve(scores.size());
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const auto& [resp, i] = origin[k];
    ResultEntry e{std::move(scores[k]), resp->tag, {}, {}};
    if (i < resp->snapshots.size()) {
      e.class_name = resp->snapshots[i].class_name;
      e.detail = resp->snapshots[i].values;
    }
    out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(), [](const ResultEntry& a, const ResultEntry& b) {
    if (a.score.rank != b.score.rank) return a.score.rank < b.score.rank;
    if (a.score.instance_id != b.score.instance_id) return a.score.instance_id < b.score.instance_id;
    return a.provenance->provider_id < b.provenance->provider_id;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Text

std::string format_entry(const ResultEntry& e) {
  std::string line = e.score.instance_id;
  for (const auto& [name, values] : e.detail) {
    std::vector<std::string> shown;
    for (const auto& v : values) shown.push_back(display(v));
    line += "  " + name + ": " + join(shown, ", ");
  }
  char rank[32];
  std::snprintf(rank, sizeof rank, "%.4f", e.score.rank);
  line += "  [rank ";
  line += rank;
  line += "]";
  return line;
}

std::string render_flat_text(std::span<const ResultEntry> entries) {
  if (entries.empty()) return "0 results\n";
  std::string out;
  for (const auto& e : entries) out += format_entry(e) + "\n";
  return out;
}

std::string render_groups_text(const GroupedResults& grouped) {
  if (grouped.groups.empty()) return "0 results\n";
  std::string out;
  std::size_t n = 0;
  for (const auto& g : grouped.groups) {
    if (n) out += "\n";
    out += "Group#" + std::to_string(++n) + " (" + join(g.signature, ", ") + ")\n-----\n";
    for (const auto& e : g.members) out += format_entry(e) + "\n";
  }
  return out;
}

std::string render_provider_text(std::span<const ResultEntry> entries,
                                 std::span<const ProvenanceTag> registration_order) {
  if (entries.empty()) return "0 results\n";
  std::string out;
  std::size_t n = 0;
  for (const auto& [tag, members] : group_by_provider(entries, registration_order)) {
    if (n++) out += "\n";
    out += tag.provider_id + " at <" + tag.ontology_uri + ">\n\n";
    for (const auto& e : members) out += format_entry(e) + "\n";
  }
  return out;
}

json entry_to_json(const ResultEntry& e) {
  json j = score_to_json(e.score);
  if (!e.class_name.empty()) j["class"] = e.class_name;
  j["values"] = values_to_json(e.detail);
  if (e.provenance) j["provenance"] = {{"provider_id", e.provenance->provider_id}, {"ontology_uri", e.provenance->ontology_uri}};
  return j;
}

json flat_to_json(std::span<const ResultEntry> entries) {
  json arr = json::array();
  for (const auto& e : entries) arr.push_back(entry_to_json(e));
  return {{"results", std::move(arr)}};
}

json grouped_to_json(const GroupedResults& grouped) {
  json groups = json::array();
  for (const auto& g : grouped.groups) {
    json members = json::array();
    for (const auto& e : g.members) members.push_back(entry_to_json(e));
    groups.push_back({{"signature", g.signature}, {"members", std::move(members)}});
  }
  return {{"groups", std::move(groups)}, {"order", grouped.order_mode == GroupOrder::asc ? "asc" : "desc"}};
}

}  // namespace ontomatch
