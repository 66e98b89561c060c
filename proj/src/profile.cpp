#include "ontomatch/profile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "fs_util.hpp"
#include "json_util.hpp"

namespace ontomatch {

bool valid_user_id(std::string_view id) {
  if (id.empty() || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == '@';
  });
}

bool query_valid_at(const SavedQuery& q, Timestamp now) { return parse_timestamp_or_throw(q.valid_until) >= now; }

// ---------------------------------------------------------------------------
// Rules

std::vector<Violation> validate_rules(std::span<const Rule> rules, const OntologySchema& profiler) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  const bool derives_age = profiler.find_property(kBirthdateAttribute) != nullptr;
  for (const auto& r : rules) {
    if (r.conditions.empty()) out.push_back({K::malformed, r.name, "rule has no conditions"});
    if (r.category.empty()) out.push_back({K::malformed, r.name, "rule has no category"});
    for (const auto& c : r.conditions) {
      if (c.op == ConstraintOp::range) out.push_back({K::malformed, r.name, "rules do not support range"});
      if (!profiler.find_property(c.attribute) && !(derives_age && c.attribute == kAgeAttribute))
        out.push_back({K::unknown_property, c.attribute, "rule '" + r.name + "' references an undeclared attribute"});
    }
  }
  return out;
}

namespace {

std::map<std::string, Value> effective_attributes(const UserProfile& profile, Timestamp now) {
  auto attrs = profile.attributes;
  if (!attrs.count(kAgeAttribute)) {
    if (auto it = attrs.find(kBirthdateAttribute); it != attrs.end()) {
      if (const auto* s = std::get_if<std::string>(&it->second)) {
        if (auto born = parse_timestamp(*s)) attrs[kAgeAttribute] = std::int64_t{years_between(*born, now)};
      }
    }
  }
  return attrs;
}

bool holds(const RuleCondition& c, const std::map<std::string, Value>& attrs) {
  auto it = attrs.find(c.attribute);
  if (it == attrs.end()) return false;
  return satisfies(Constraint{c.attribute, c.op, c.value, std::nullopt, 10}, it->second);
}

}  // namespace

std::set<std::string> evaluate_rules(std::span<const Rule> rules, const UserProfile& profile, Timestamp now) {
  const auto attrs = effective_attributes(profile, now);
  std::set<std::string> categories;
  for (const auto& r : rules) {
    const bool all = std::all_of(r.conditions.begin(), r.conditions.end(),
                                 [&](const RuleCondition& c) { return holds(c, attrs); });
    if (all && !r.conditions.empty()) categories.insert(r.category);
  }
  return categories;
}

// ---------------------------------------------------------------------------
// PUSH triggers

std::vector<Recommendation> on_login(const UserProfile& profile, std::span<const Rule> rules,
                                     std::span<const Instance> resources, const Taxonomy& taxonomy,
                                     const OntologySchema& schema, Timestamp now) {
  std::map<std::string, Recommendation> best;
  auto offer = [&](Recommendation r) {
    auto it = best.find(r.instance_id);
    if (it == best.end()) {
      best.emplace(r.instance_id, std::move(r));
      return;
    }
    const bool better = r.rank < it->second.rank ||
                        (r.rank == it->second.rank && r.source == RecommendationSource::saved_query &&
                         it->second.source == RecommendationSource::category);
    if (better) it->second = std::move(r);
  };

  const auto categories = evaluate_rules(rules, profile, now);
  for (const auto& res : resources) {
    for (const auto& cat : res.categories) {
      if (categories.count(cat)) {
        offer({res.id, RecommendationSource::category, cat, 1.0, res});
        break;
      }
    }
  }

  std::map<std::string_view, const Instance*> by_id;
  for (const auto& res : resources) by_id.emplace(res.id, &res);
  for (const auto& q : profile.saved_queries) {
    if (!query_valid_at(q, now) || !validate_demand(schema, q.demand).empty()) continue;
    for (const auto& score : match_all(taxonomy, q.demand, resources)) {
      if (score.n_par != 0) continue;
      offer({score.instance_id, RecommendationSource::saved_query, q.query_id, score.rank,
             *by_id.at(score.instance_id)});
    }
  }

  std::vector<Recommendation> out;
  for (auto& [_, r] : best) out.push_back(std::move(r));
  std::stable_sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.instance_id < b.instance_id;
  });
  return out;
}

std::vector<std::pair<std::string, Recommendation>> on_resource_published(
    const EventRecord& event, const Instance& published, std::span<const UserProfile> profiles,
    const Taxonomy& taxonomy, const OntologySchema& schema) {
  std::vector<std::pair<std::string, Recommendation>> out;
  if (event.kind != EventKind::resource_published) return out;
  const Timestamp at = parse_timestamp_or_throw(event.at);
  for (const auto& p : profiles) {
    for (const auto& q : p.saved_queries) {
      if (!query_valid_at(q, at) || !validate_demand(schema, q.demand).empty()) continue;
      ComparisonCache cache;
      const RawMatch raw = match_one(taxonomy, q.demand, published, cache);
      if (raw.n_par != 0) continue;
      const double rank = normalize_ranks(std::span(&raw, 1)).front().rank;
      out.emplace_back(p.user_id, Recommendation{published.id, RecommendationSource::saved_query, q.query_id, rank, published});
    }
  }
  return out;
}

UserProfile expire_queries(UserProfile profile, Timestamp now) {
  std::erase_if(profile.saved_queries, [&](const SavedQuery& q) { return !query_valid_at(q, now); });
  return profile;
}

// ---------------------------------------------------------------------------
// JSON

json profile_to_json(const UserProfile& p) {
  json attrs = json::object();
  for (const auto& [k, v] : p.attributes) attrs[k] = value_to_json(v);
  json queries = json::array();
  for (const auto& q : p.saved_queries)
    queries.push_back({{"query_id", q.query_id}, {"demand", demand_to_json(q.demand)}, {"valid_until", q.valid_until}});
  return {{"user_id", p.user_id}, {"attributes", std::move(attrs)}, {"saved_queries", std::move(queries)}};
}

UserProfile profile_from_json(const json& j) {
  detail::check_keys(j, {"user_id", "attributes", "saved_queries"}, "profile");
  UserProfile p;
  p.user_id = detail::required_string(j, "user_id", "profile");
  if (auto it = j.find("attributes"); it != j.end()) {
    detail::expect_object(*it, "attributes");
    for (const auto& [k, v] : it->items()) p.attributes.emplace(k, value_from_json(v));
  }
  if (auto it = j.find("saved_queries"); it != j.end()) {
    if (!it->is_array()) detail::malformed(p.user_id, "'saved_queries' must be an array");
    for (const auto& qj : *it) {
      detail::check_keys(qj, {"query_id", "demand", "valid_until"}, "saved query");
      SavedQuery q;
      q.query_id = detail::required_string(qj, "query_id", "saved query");
      q.demand = demand_from_json(detail::required(qj, "demand", q.query_id));
      q.valid_until = detail::required_string(qj, "valid_until", q.query_id);
      if (!parse_timestamp(q.valid_until)) detail::malformed(q.query_id, "valid_until is not ISO-8601");
      p.saved_queries.push_back(std::move(q));
    }
  }
  return p;
}

json rule_to_json(const Rule& r) {
  json conds = json::array();
  for (const auto& c : r.conditions)
    conds.push_back({{"attribute", c.attribute}, {"op", to_string(c.op)}, {"value", value_to_json(c.value)}});
  return {{"name", r.name}, {"conditions", std::move(conds)}, {"category", r.category}};
}

Rule rule_from_json(const json& j) {
  detail::check_keys(j, {"name", "conditions", "category"}, "rule");
  Rule r;
  r.name = detail::required_string(j, "name", "rule");
  r.category = detail::required_string(j, "category", r.name);
  const json& conds = detail::required(j, "conditions", r.name);
  if (!conds.is_array() || conds.empty()) detail::malformed(r.name, "'conditions' must be a non-empty array");
  for (const auto& cj : conds) {
    detail::check_keys(cj, {"attribute", "op", "value"}, "condition");
    RuleCondition c;
    c.attribute = detail::required_string(cj, "attribute", r.name);
    const std::string op = detail::required_string(cj, "op", r.name);
    auto parsed = constraint_op_from_string(op);
    if (!parsed || *parsed == ConstraintOp::range) detail::malformed(r.name, "unsupported operator '" + op + "'");
    c.op = *parsed;
    c.value = value_from_json(detail::required(cj, "value", r.name));
    r.conditions.push_back(std::move(c));
  }
  return r;
}

std::vector<Rule> rules_from_json(const json& j) {
  if (!j.is_array()) detail::malformed("rules", "rules document must be an array");
  std::vector<Rule> out;
  for (const auto& r : j) out.push_back(rule_from_json(r));
  return out;
}

std::vector<Rule> load_rules_file(const std::filesystem::path& path) {
  return rules_from_json(json::parse(detail::read_file(path)));
}

json recommendation_to_json(const Recommendation& r) {
  return {{"instance_id", r.instance_id},
          {"source", r.source == RecommendationSource::category ? "category" : "saved-query"},
          {"label", r.label},
          {"rank", r.rank},
          {"instance", instance_to_json(r.instance)}};
}

Recommendation recommendation_from_json(const json& j) {
  Recommendation r;
  r.instance_id = detail::required_string(j, "instance_id", "recommendation");
  const std::string source = detail::required_string(j, "source", "recommendation");
  r.source = source == "category" ? RecommendationSource::category : RecommendationSource::saved_query;
  r.label = detail::required_string(j, "label", "recommendation");
  r.rank = detail::required(j, "rank", "recommendation").get<double>();
  r.instance = instance_from_json(detail::required(j, "instance", "recommendation"));
  return r;
}

json inbox_entry_to_json(const InboxEntry& e) {
  return {{"user_id", e.user_id}, {"event_at", e.event_at}, {"recommendation", recommendation_to_json(e.recommendation)}};
}

InboxEntry inbox_entry_from_json(const json& j) {
  InboxEntry e;
  e.user_id = detail::required_string(j, "user_id", "inbox entry");
  e.event_at = detail::required_string(j, "event_at", "inbox entry");
  e.recommendation = recommendation_from_json(detail::required(j, "recommendation", "inbox entry"));
  return e;
}

// ---------------------------------------------------------------------------
// ProfileStore

ProfileStore::ProfileStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
  for (const auto& f : std::filesystem::directory_iterator(*dir_)) {
    const auto name = f.path().filename().string();
    if (name.ends_with(".inbox.jsonl")) {
      const std::string user = name.substr(0, name.size() - std::string_view(".inbox.jsonl").size());
      std::ifstream in(f.path());
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        InboxEntry e = inbox_entry_from_json(json::parse(line));
        inboxes_[user].push_back(std::move(e));
      }
    } else if (name.ends_with(".json")) {
      UserProfile p = profile_from_json(json::parse(detail::read_file(f.path())));
      profiles_[p.user_id] = std::move(p);
    }
  }
}

std::optional<UserProfile> ProfileStore::get(const std::string& user_id) const {
  std::shared_lock lock(mutex_);
  auto it = profiles_.find(user_id);
  if (it == profiles_.end()) return std::nullopt;
  return it->second;
}

std::vector<UserProfile> ProfileStore::snapshot() const {
  std::shared_lock lock(mutex_);
  std::vector<UserProfile> out;
  for (const auto& [_, p] : profiles_) out.push_back(p);
  return out;
}

void ProfileStore::persist_profile(const UserProfile& p) const {
  if (!dir_) return;
  detail::write_file_atomic(*dir_ / (p.user_id + ".json"), profile_to_json(p).dump(2));
}

void ProfileStore::append_inbox(const InboxEntry& e) const {
  if (!dir_) return;
  std::ofstream out(*dir_ / (e.user_id + ".inbox.jsonl"), std::ios::app);
  out << inbox_entry_to_json(e).dump() << '\n';
}

void ProfileStore::put(UserProfile profile) {
  if (!valid_user_id(profile.user_id)) throw std::invalid_argument("invalid user id '" + profile.user_id + "'");
  std::unique_lock lock(mutex_);
  persist_profile(profile);
  profiles_[profile.user_id] = std::move(profile);
}

void ProfileStore::save_query(const std::string& user_id, SavedQuery query, Timestamp now) {
  if (!valid_user_id(user_id)) throw std::invalid_argument("invalid user id '" + user_id + "'");
  if (!query_valid_at(query, now)) throw std::invalid_argument("query '" + query.query_id + "' is already expired");
  std::unique_lock lock(mutex_);
  UserProfile& p = profiles_[user_id];
  p.user_id = user_id;
  for (const auto& q : p.saved_queries)
    if (q.query_id == query.query_id) throw std::invalid_argument("duplicate query id '" + query.query_id + "'");
  p.saved_queries.push_back(std::move(query));
  persist_profile(p);
}

void ProfileStore::expire(Timestamp now) {
  std::unique_lock lock(mutex_);
  for (auto& [_, p] : profiles_) {
    const auto before = p.saved_queries.size();
    p = expire_queries(std::move(p), now);
    if (p.saved_queries.size() != before) persist_profile(p);
  }
}

std::vector<InboxEntry> ProfileStore::publish(const EventRecord& event, const Instance& published,
                                              const Taxonomy& taxonomy, const OntologySchema& schema) {
  std::unique_lock lock(mutex_);
  std::vector<UserProfile> profiles;
  for (const auto& [_, p] : profiles_) profiles.push_back(p);
  std::vector<InboxEntry> delivered;
  for (auto& [user, rec] : on_resource_published(event, published, profiles, taxonomy, schema)) {
    const std::string key = std::to_string(static_cast<int>(event.kind)) + '\x1f' + event.payload + '\x1f' +
                            event.at + '\x1f' + user + '\x1f' + rec.label;
    if (!delivered_.insert(key).second) continue;
    InboxEntry e{user, event.at, std::move(rec)};
    append_inbox(e);
    inboxes_[user].push_back(e);
    delivered.push_back(std::move(e));
  }
  return delivered;
}

std::vector<InboxEntry> ProfileStore::inbox(const std::string& user_id) const {
  std::shared_lock lock(mutex_);
  auto it = inboxes_.find(user_id);
  if (it == inboxes_.end()) return {};
  return it->second;
}

}  // namespace ontomatch
