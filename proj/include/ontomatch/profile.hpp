#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "ontomatch/matchmaker.hpp"
#include "ontomatch/ontology.hpp"
#include "ontomatch/taxonomy.hpp"
#include "ontomatch/timestamp.hpp"

namespace ontomatch {

struct SavedQuery {
  std::string query_id;
  Demand demand;
  std::string valid_until;  // ISO-8601

  bool operator==(const SavedQuery&) const = default;
};

/// The profile instance of the profiler ontology plus the saved queries.
struct UserProfile {
  std::string user_id;
  std::map<std::string, Value> attributes;
  std::vector<SavedQuery> saved_queries;

  bool operator==(const UserProfile&) const = default;
};

struct RuleCondition {
  std::string attribute;
  ConstraintOp op = ConstraintOp::eq;  // never range
  Value value;

  bool operator==(const RuleCondition&) const = default;
};

/// Conjunctive condition list classifying a user into `category`.
struct Rule {
  std::string name;
  std::vector<RuleCondition> conditions;
  std::string category;

  bool operator==(const Rule&) const = default;
};

enum class EventKind { resource_published, user_login };

struct EventRecord {
  EventKind kind = EventKind::resource_published;
  std::string payload;  // instance id or user id
  std::string at;       // ISO-8601
};

enum class RecommendationSource { category, saved_query };

struct Recommendation {
  std::string instance_id;
  RecommendationSource source = RecommendationSource::category;
  std::string label;  // category name or saved-query id
  double rank = 1.0;
  Instance instance;

  bool operator==(const Recommendation&) const = default;
};

struct InboxEntry {
  std::string user_id;
  std::string event_at;
  Recommendation recommendation;

  bool operator==(const InboxEntry&) const = default;
};

/// Attribute derived when the profile has `birthdate` but no explicit `age`.
inline constexpr const char* kBirthdateAttribute = "birthdate";
inline constexpr const char* kAgeAttribute = "age";

/// Rules must reference properties of the profiler schema (or the derived
/// `age` when `birthdate` is declared).
std::vector<Violation> validate_rules(std::span<const Rule> rules, const OntologySchema& profiler);

/// Categories whose every condition holds. Missing attributes fail their
/// condition; a type mismatch throws TypeMismatch.
std::set<std::string> evaluate_rules(std::span<const Rule> rules, const UserProfile& profile, Timestamp now);

/// Category matches plus replay of every unexpired saved query, deduplicated
/// by instance id keeping the better (lower) rank. Category matches carry
/// rank 1.0. Sorted by rank, then instance id.
std::vector<Recommendation> on_login(const UserProfile& profile, std::span<const Rule> rules,
                                     std::span<const Instance> resources, const Taxonomy& taxonomy,
                                     const OntologySchema& schema, Timestamp now);

/// One recommendation per (user, unexpired saved query) whose match of the
/// new instance has no conflict (n_par = 0).
std::vector<std::pair<std::string, Recommendation>> on_resource_published(
    const EventRecord& event, const Instance& published, std::span<const UserProfile> profiles,
    const Taxonomy& taxonomy, const OntologySchema& schema);

/// Drops saved queries with valid_until < now.
UserProfile expire_queries(UserProfile profile, Timestamp now);

bool query_valid_at(const SavedQuery& q, Timestamp now);

json profile_to_json(const UserProfile& p);
UserProfile profile_from_json(const json& j);
json rule_to_json(const Rule& r);
Rule rule_from_json(const json& j);
std::vector<Rule> rules_from_json(const json& j);
std::vector<Rule> load_rules_file(const std::filesystem::path& path);
json recommendation_to_json(const Recommendation& r);
Recommendation recommendation_from_json(const json& j);
json inbox_entry_to_json(const InboxEntry& e);
InboxEntry inbox_entry_from_json(const json& j);

/// Profiles, saved queries, and inboxes. Mutations are serialized; readers
/// see a consistent state. With a directory, each profile lives in
/// `<user>.json` and each inbox in `<user>.inbox.jsonl`.
class ProfileStore {
 public:
  ProfileStore() = default;
  explicit ProfileStore(std::filesystem::path dir);

  std::optional<UserProfile> get(const std::string& user_id) const;
  std::vector<UserProfile> snapshot() const;

  void put(UserProfile profile);
  /// Creates the profile when missing. Throws std::invalid_argument on a
  /// duplicate query id or an already-expired validity.
  void save_query(const std::string& user_id, SavedQuery query, Timestamp now);
  void expire(Timestamp now);

  /// Delivers a publication event; each (event, user, query) triple is
  /// delivered at most once per store.
  std::vector<InboxEntry> publish(const EventRecord& event, const Instance& published, const Taxonomy& taxonomy,
                                  const OntologySchema& schema);

  std::vector<InboxEntry> inbox(const std::string& user_id) const;

 private:
  void persist_profile(const UserProfile& p) const;
  void append_inbox(const InboxEntry& e) const;

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, UserProfile> profiles_;
  std::map<std::string, std::vector<InboxEntry>> inboxes_;
  std::set<std::string> delivered_;
};

bool valid_user_id(std::string_view id);

}  // namespace ontomatch
