// Command-line front end: one binary, one subcommand per role.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ontomatch/bench.hpp"
#include "ontomatch/matchmaker.hpp"
#include "ontomatch/ontology.hpp"
#include "ontomatch/peer_net.hpp"
#include "ontomatch/presentation.hpp"
#include "ontomatch/profile.hpp"
#include "ontomatch/registry.hpp"
#include "ontomatch/synth.hpp"
#include "ontomatch/taxonomy.hpp"

using namespace ontomatch;

namespace {

enum Exit : int { kOk = 0, kValidation = 1, kUnreachable = 2, kProtocol = 3 };

struct Globals {
  bool json = false;
  std::uint64_t seed = 42;
};

std::atomic<bool> g_stop{false};
extern "C" void on_signal(int) { g_stop = true; }

void wait_for_signal() {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Demand load_demand(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ValidationError({{Violation::Kind::malformed, path, e.what()}});
  }
  return demand_from_json(j);
}

void print_violations(const std::vector<Violation>& vs) {
  for (const auto& v : vs) std::cerr << "  " << to_string(v.kind) << " " << v.name << ": " << v.message << "\n";
}

// Splits "host:port" for binding.
std::pair<std::string, int> split_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("--listen expects host:port");
  return {listen.substr(0, colon), std::stoi(listen.substr(colon + 1))};
}

Value parse_attribute_value(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  try {
    std::size_t used = 0;
    const long long i = std::stoll(text, &used);
    if (used == text.size()) return static_cast<std::int64_t>(i);
    const double d = std::stod(text, &used);
    if (used == text.size()) return d;
  } catch (const std::exception&) {
  }
  return text;
}

std::vector<ResultEntry> rank_locally(const OntologyDocument& doc, const Demand& demand) {
  check_demand(doc.schema, demand);
  const Taxonomy taxonomy = build_taxonomy(doc.schema);
  ComparisonCache cache;
  const auto scores = match_all(taxonomy, demand, doc.instances, cache);
  return render_flat(scores, doc.instances);
}

void emit_results(const Globals& g, const std::vector<ResultEntry>& entries, Strategy strategy, GroupOrder order) {
  if (strategy == Strategy::naive) {
    if (g.json)
      std::cout << flat_to_json(entries).dump(2) << "\n";
    else
      std::cout << render_flat_text(entries);
    return;
  }
  const GroupedResults grouped = group_by_additional(entries, order);
  if (g.json)
    std::cout << grouped_to_json(grouped).dump(2) << "\n";
  else
    std::cout << render_groups_text(grouped);
}

// ---------------------------------------------------------------------------

int cmd_validate(const Globals& g, const std::string& path) {
  const OntologyDocument doc = load_ontology_file(path);
  const Taxonomy taxonomy = build_taxonomy(doc.schema);
  const auto datatype = doc.schema.count_properties(PropertyKind::datatype);
  const auto object = doc.schema.count_properties(PropertyKind::object);
  if (g.json) {
    std::cout << json{{"uri", doc.schema.uri},
                      {"classes", doc.schema.classes.size()},
                      {"equivalence_groups", taxonomy.equivalence_groups().size()},
                      {"datatype_properties", datatype},
                      {"object_properties", object},
                      {"instances", doc.instances.size()},
                      {"fingerprint", tbox_fingerprint(doc.schema)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "ok " << doc.schema.uri << "\n"
              << "classes: " << doc.schema.classes.size() << "\n"
              << "datatype properties: " << datatype << "\n"
              << "object properties: " << object << "\n"
              << "instances: " << doc.instances.size() << "\n";
  }
  return kOk;
}

struct MatchArgs {
  std::string ontology, demand, strategy = "naive", group_order = "asc";
};

int cmd_match(const Globals& g, const MatchArgs& a) {
  const auto strategy = strategy_from_string(a.strategy);
  const auto order = group_order_from_string(a.group_order);
  if (!strategy || !order) throw std::invalid_argument("unknown --strategy or --group-order value");
  const OntologyDocument doc = load_ontology_file(a.ontology);
  emit_results(g, rank_locally(doc, load_demand(a.demand)), *strategy, *order);
  return kOk;
}

struct ServeProviderArgs {
  std::string listen = "127.0.0.1:8080", ontology, registry, provider_id = "provider", profile_dir;
  bool bench_mode = false;
};

int cmd_serve_provider(const Globals&, const ServeProviderArgs& a) {
  auto profiles = a.profile_dir.empty() ? std::make_shared<ProfileStore>() : std::make_shared<ProfileStore>(a.profile_dir);
  ProviderNode node(load_ontology_file(a.ontology), {a.provider_id, a.bench_mode, true}, profiles);
  const auto [host, port] = split_listen(a.listen);
  const int bound = node.start(host, port);
  const std::string address = host + ":" + std::to_string(bound);
  std::cerr << a.provider_id << " serving " << node.schema().uri << " on " << address << "\n";

  std::optional<RegistryClient> registry;
  if (!a.registry.empty()) {
    registry.emplace(a.registry);
    RegistryEntry e;
    e.ontology_uri = node.schema().uri;
    e.keywords.insert(node.schema().keywords.begin(), node.schema().keywords.end());
    e.tbox_fingerprint = node.fingerprint();
    e.provider_address = address;
    registry->register_entry(e);
  }
  wait_for_signal();
  if (registry) {
    try {
      registry->deregister(node.schema().uri);
    } catch (const std::exception& e) {
      std::cerr << "deregistration failed: " << e.what() << "\n";
    }
  }
  node.stop();
  return kOk;
}

int cmd_serve_registry(const std::string& listen, const std::string& snapshot) {
  Registry registry(snapshot.empty() ? std::nullopt : std::optional<std::filesystem::path>(snapshot));
  RegistryServer server(registry);
  const auto [host, port] = split_listen(listen);
  const int bound = server.start(host, port);
  std::cerr << "registry on " << host << ":" << bound << "\n";
  wait_for_signal();
  server.stop();
  return kOk;
}

int cmd_search(const Globals& g, const std::string& registry_url, const std::vector<std::string>& keywords) {
  const auto hits = RegistryClient(registry_url).search({keywords.begin(), keywords.end()});
  if (g.json) {
    json arr = json::array();
    for (const auto& e : hits) arr.push_back(registry_entry_to_json(e));
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const auto& e : hits) std::cout << e.ontology_uri << " " << e.provider_address << "\n";
  }
  if (hits.empty()) {
    std::cerr << "no entries\n";
    return kUnreachable;
  }
  return kOk;
}

struct FanoutArgs {
  std::string registry, demand, mode = "async", strategy = "naive", group_order = "asc";
  std::vector<std::string> keywords, providers;
  int timeout_ms = 5000;
  bool timing = false;
};

int cmd_fanout(const Globals& g, const FanoutArgs& a) {
  const auto mode = fanout_mode_from_string(a.mode);
  const auto strategy = strategy_from_string(a.strategy);
  const auto order = group_order_from_string(a.group_order);
  if (!mode || !strategy || !order) throw std::invalid_argument("unknown --mode, --strategy or --group-order value");
  const Demand demand = load_demand(a.demand);

  FanoutPlan plan;
  plan.mode = *mode;
  plan.per_request_timeout_ms = a.timeout_ms;
  plan.providers = a.providers;
  if (!a.registry.empty()) {
    for (const auto& e : RegistryClient(a.registry).search({a.keywords.begin(), a.keywords.end()})) {
      plan.providers.push_back(e.provider_address);
      plan.known_fingerprints[e.provider_address] = e.tbox_fingerprint;
    }
  }
  if (plan.providers.empty()) {
    std::cout << "no providers\n";
    return kUnreachable;
  }

  const FanoutResult result = fanout(plan, demand);
  for (const auto& f : result.failures) std::cerr << "provider failed: " << f.error << "\n";
  for (const auto& t : result.timing.per_provider)
    if (t.clamped) std::cerr << "warning: " << t.provider_id << " reported matchmaking longer than its round trip\n";

  if (g.json) {
    json out = *strategy == Strategy::naive ? flat_to_json(result.merged)
                                            : grouped_to_json(group_by_additional(result.merged, *order));
    out["timing"] = timing_to_json(result.timing);
    json failures = json::array();
    for (const auto& f : result.failures) failures.push_back({{"address", f.address}, {"error", f.error}});
    out["failures"] = std::move(failures);
    std::cout << out.dump(2) << "\n";
  } else if (*strategy == Strategy::naive) {
    std::cout << render_provider_text(result.merged, result.provider_order);
  } else {
    const GroupedResults grouped = group_by_additional(result.merged, *order);
    std::size_t n = 0;
    for (const auto& grp : grouped.groups) {
      if (n) std::cout << "\n";
      std::cout << "Group#" << ++n << " (";
      for (std::size_t i = 0; i < grp.signature.size(); ++i) std::cout << (i ? ", " : "") << grp.signature[i];
      std::cout << ")\n-----\n" << render_provider_text(grp.members, result.provider_order);
    }
    if (grouped.groups.empty()) std::cout << "0 results\n";
  }
  if (a.timing && !g.json) std::cerr << timing_to_json(result.timing).dump(2) << "\n";
  return kOk;
}

struct ProfileArgs {
  std::string profile_dir = "profiles", user, rules, ontology, profiler, demand, valid_until, query_id, now;
  std::vector<std::string> attributes;
};

Timestamp now_or(const std::string& text) { return text.empty() ? now_utc() : parse_timestamp_or_throw(text); }

int cmd_profile_login(const Globals& g, const ProfileArgs& a) {
  ProfileStore store(a.profile_dir);
  auto profile = store.get(a.user);
  if (!profile) throw std::invalid_argument("no profile for user '" + a.user + "'");
  const std::vector<Rule> rules = a.rules.empty() ? std::vector<Rule>{} : load_rules_file(a.rules);
  if (!a.profiler.empty()) {
    const auto profiler = load_ontology_file(a.profiler);
    if (auto v = validate_rules(rules, profiler.schema); !v.empty()) throw ValidationError(v);
  }
  const OntologyDocument doc = load_ontology_file(a.ontology);
  const Taxonomy taxonomy = build_taxonomy(doc.schema);
  const auto recs = on_login(*profile, rules, doc.instances, taxonomy, doc.schema, now_or(a.now));
  if (g.json) {
    json arr = json::array();
    for (const auto& r : recs) arr.push_back(recommendation_to_json(r));
    std::cout << arr.dump(2) << "\n";
  } else {
    if (recs.empty()) std::cout << "no recommendations\n";
    for (const auto& r : recs) {
      char rank[32];
      std::snprintf(rank, sizeof rank, "%.4f", r.rank);
      std::cout << r.instance_id << "  ["
                << (r.source == RecommendationSource::category ? "category " : "saved query ") << r.label
                << "]  rank " << rank << "\n";
    }
  }
  return kOk;
}

int cmd_profile_set(const ProfileArgs& a) {
  ProfileStore store(a.profile_dir);
  UserProfile p = store.get(a.user).value_or(UserProfile{a.user, {}, {}});
  for (const auto& kv : a.attributes) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("attribute must be name=value: " + kv);
    p.attributes[kv.substr(0, eq)] = parse_attribute_value(kv.substr(eq + 1));
  }
  store.put(p);
  return kOk;
}

int cmd_profile_save_query(const ProfileArgs& a) {
  ProfileStore store(a.profile_dir);
  SavedQuery q{a.query_id, load_demand(a.demand), a.valid_until};
  parse_timestamp_or_throw(q.valid_until);
  if (!a.ontology.empty()) check_demand(load_ontology_file(a.ontology).schema, q.demand);
  store.save_query(a.user, q, now_or(a.now));
  std::cout << "saved " << q.query_id << "\n";
  return kOk;
}

int cmd_profile_inbox(const Globals& g, const ProfileArgs& a) {
  ProfileStore store(a.profile_dir);
  const auto entries = store.inbox(a.user);
  if (g.json) {
    json arr = json::array();
    for (const auto& e : entries) arr.push_back(inbox_entry_to_json(e));
    std::cout << arr.dump(2) << "\n";
  } else {
    if (entries.empty()) std::cout << "inbox empty\n";
    for (const auto& e : entries)
      std::cout << e.event_at << "  " << e.recommendation.instance_id << "  [" << e.recommendation.label << "]\n";
  }
  return kOk;
}

struct BenchArgs {
  std::string profile = "computer", mode = "sync", csv;
  std::size_t classes = 0, object_properties = 0, datatype_properties = 0;
  std::size_t instances = 1000, peers = 0, repetitions = 3, queries = 1;
  std::vector<std::size_t> properties{1, 2, 3, 4};
  std::vector<int> delays;
  bool parallel = false;
};

int cmd_bench(const Globals& g, const BenchArgs& a) {
  BenchSpec spec;
  if (a.classes > 0) {
    spec.profile = {"custom", a.classes, a.object_properties, a.datatype_properties};
  } else {
    auto p = find_profile(a.profile);
    if (!p) throw std::invalid_argument("unknown profile '" + a.profile + "'");
    spec.profile = *p;
  }
  const auto mode = fanout_mode_from_string(a.mode);
  if (!mode) throw std::invalid_argument("unknown --mode value");
  spec.instance_count = a.instances;
  spec.query_properties = a.properties;
  spec.peers = a.peers;
  spec.mode = *mode;
  spec.repetitions = a.repetitions;
  spec.queries_per_point = a.queries;
  spec.seed = g.seed;
  spec.inject_delay_ms = a.delays;
  spec.parallel_scoring = a.parallel;
  const auto rows = run_bench(spec);
  const std::string csv = bench_csv(rows);
  if (!a.csv.empty()) {
    std::ofstream out(a.csv);
    if (!out) throw std::runtime_error("cannot write " + a.csv);
    out << csv;
  }
  std::cout << (g.json ? csv : bench_table(rows));
  return kOk;
}

struct GenerateArgs {
  std::string profile = "computer", output, demand_output;
  std::size_t classes = 0, object_properties = 0, datatype_properties = 0, instances = 100, demand_properties = 0;
};

int cmd_generate(const Globals& g, const GenerateArgs& a) {
  OntologyProfile profile;
  if (a.classes > 0) {
    profile = {"custom", a.classes, a.object_properties, a.datatype_properties};
  } else {
    auto p = find_profile(a.profile);
    if (!p) throw std::invalid_argument("unknown profile '" + a.profile + "'");
    profile = *p;
  }
  const OntologyDocument doc = generate_ontology(profile, a.instances, g.seed);
  const std::string text = serialize_ontology(doc);
  if (a.output.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream(a.output) << text << "\n";
  }
  if (a.demand_properties > 0) {
    const std::string demand = demand_to_json(generate_demand(doc.schema, a.demand_properties, g.seed)).dump(2);
    if (a.demand_output.empty())
      std::cout << demand << "\n";
    else
      std::ofstream(a.demand_output) << demand << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology-driven matchmaking: validation, local and distributed matching, profiles, benchmarks"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--seed", g.seed, "Seed for synthetic generation");

  app.fallthrough();
  std::function<int()> run;

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check an ontology document and print its counts");
  validate->add_option("file", validate_path, "Ontology document (.onto.json)")->required();
  validate->callback([&] { run = [&] { return cmd_validate(g, validate_path); }; });

  MatchArgs match_args;
  auto* match = app.add_subcommand("match", "Rank the supplies of an ontology against a demand");
  match->add_option("--ontology", match_args.ontology)->required();
  match->add_option("--demand", match_args.demand)->required();
  match->add_option("--strategy", match_args.strategy, "naive | grouping");
  match->add_option("--group-order", match_args.group_order, "asc | desc");
  match->callback([&] { run = [&] { return cmd_match(g, match_args); }; });

  ServeProviderArgs provider_args;
  auto* serve_provider = app.add_subcommand("serve-provider", "Serve an ontology and its supplies over HTTP");
  serve_provider->add_option("--listen", provider_args.listen, "host:port (port 0 picks one)");
  serve_provider->add_option("--ontology", provider_args.ontology)->required();
  serve_provider->add_option("--registry", provider_args.registry, "Registry URL to register with");
  serve_provider->add_option("--provider-id", provider_args.provider_id);
  serve_provider->add_option("--profile-dir", provider_args.profile_dir);
  serve_provider->add_flag("--bench-mode", provider_args.bench_mode, "Honor injected delays");
  serve_provider->callback([&] { run = [&] { return cmd_serve_provider(g, provider_args); }; });

  std::string registry_listen = "127.0.0.1:8079", registry_snapshot = "registry.json";
  auto* serve_registry = app.add_subcommand("serve-registry", "Serve the ontology registry");
  serve_registry->add_option("--listen", registry_listen);
  serve_registry->add_option("--snapshot", registry_snapshot, "Snapshot file; empty keeps the registry in memory");
  serve_registry->callback([&] { run = [&] { return cmd_serve_registry(registry_listen, registry_snapshot); }; });

  std::string search_registry;
  std::vector<std::string> search_keywords;
  auto* search = app.add_subcommand("search", "Find registered ontologies by keyword");
  search->add_option("--registry", search_registry)->required();
  search->add_option("--keyword", search_keywords);
  search->callback([&] { run = [&] { return cmd_search(g, search_registry, search_keywords); }; });

  FanoutArgs fanout_args;
  auto* fan = app.add_subcommand("fanout", "Send a demand to every matching provider and merge the results");
  fan->add_option("--registry", fanout_args.registry);
  fan->add_option("--keyword", fanout_args.keywords);
  fan->add_option("--provider", fanout_args.providers, "Explicit provider host:port (repeatable)");
  fan->add_option("--demand", fanout_args.demand)->required();
  fan->add_option("--mode", fanout_args.mode, "sync | async");
  fan->add_option("--timeout-ms", fanout_args.timeout_ms)->check(CLI::PositiveNumber);
  fan->add_option("--strategy", fanout_args.strategy, "naive | grouping");
  fan->add_option("--group-order", fanout_args.group_order, "asc | desc");
  fan->add_flag("--timing", fanout_args.timing, "Print the timing breakdown to stderr");
  fan->callback([&] { run = [&] { return cmd_fanout(g, fanout_args); }; });

  ProfileArgs profile_args;
  auto* profile = app.add_subcommand("profile", "Manage user profiles and recommendations");
  profile->require_subcommand(1);
  profile->add_option("--profile-dir", profile_args.profile_dir);
  auto* login = profile->add_subcommand("login", "Recommendations for a user at login");
  login->add_option("--user", profile_args.user)->required();
  login->add_option("--ontology", profile_args.ontology, "Resources to recommend from")->required();
  login->add_option("--rules", profile_args.rules);
  login->add_option("--profiler", profile_args.profiler, "Profiler ontology the rules refer to");
  login->add_option("--now", profile_args.now, "Evaluation instant (ISO-8601)");
  login->callback([&] { run = [&] { return cmd_profile_login(g, profile_args); }; });
  auto* set = profile->add_subcommand("set", "Create or update profile attributes");
  set->add_option("--user", profile_args.user)->required();
  set->add_option("--attribute", profile_args.attributes, "name=value (repeatable)");
  set->callback([&] { run = [&] { return cmd_profile_set(profile_args); }; });
  auto* save = profile->add_subcommand("save-query", "Store a demand to replay at login");
  save->add_option("--user", profile_args.user)->required();
  save->add_option("--demand", profile_args.demand)->required();
  save->add_option("--valid-until", profile_args.valid_until)->required();
  save->add_option("--query-id", profile_args.query_id)->required();
  save->add_option("--ontology", profile_args.ontology, "Validate the demand against this ontology");
  save->add_option("--now", profile_args.now);
  save->callback([&] { run = [&] { return cmd_profile_save_query(profile_args); }; });
  auto* inbox = profile->add_subcommand("inbox", "Show delivered recommendations");
  inbox->add_option("--user", profile_args.user)->required();
  inbox->callback([&] { run = [&] { return cmd_profile_inbox(g, profile_args); }; });

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time matchmaking on a synthetic ontology");
  bench->add_option("--profile", bench_args.profile, "computer | books | doc-egov | wine");
  bench->add_option("--classes", bench_args.classes, "Custom profile: class count");
  bench->add_option("--object-properties", bench_args.object_properties);
  bench->add_option("--datatype-properties", bench_args.datatype_properties);
  bench->add_option("--instances", bench_args.instances);
  bench->add_option("--properties", bench_args.properties, "Property count per query")->delimiter(',');
  bench->add_option("--peers", bench_args.peers, "0 runs in-process; otherwise local providers");
  bench->add_option("--mode", bench_args.mode, "sync | async");
  bench->add_option("--repetitions", bench_args.repetitions, "Measured runs per query (>= 2)");
  bench->add_option("--queries", bench_args.queries, "Distinct demands averaged per property count");
  bench->add_option("--inject-delay", bench_args.delays, "Per-peer delay in ms")->delimiter(',');
  bench->add_option("--csv", bench_args.csv, "Also write CSV here");
  bench->add_flag("--parallel", bench_args.parallel, "Use the OpenMP scoring kernel");
  bench->callback([&] { run = [&] { return cmd_bench(g, bench_args); }; });

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "Write a synthetic ontology (and optionally a demand)");
  gen->add_option("--profile", gen_args.profile);
  gen->add_option("--classes", gen_args.classes);
  gen->add_option("--object-properties", gen_args.object_properties);
  gen->add_option("--datatype-properties", gen_args.datatype_properties);
  gen->add_option("--instances", gen_args.instances);
  gen->add_option("--output", gen_args.output);
  gen->add_option("--demand-properties", gen_args.demand_properties);
  gen->add_option("--demand-output", gen_args.demand_output);
  gen->callback([&] { run = [&] { return cmd_generate(g, gen_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    return run();
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    print_violations(e.violations());
    return kValidation;
  } catch (const DemandError& e) {
    std::cerr << "invalid demand: " << e.what() << "\n";
    print_violations(e.violations());
    return kValidation;
  } catch (const InconsistentTaxonomy& e) {
    std::cerr << "inconsistent taxonomy: " << e.what() << "\n";
    return kValidation;
  } catch (const TransportError& e) {
    std::cerr << "unreachable: " << e.what() << "\n";
    return kUnreachable;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << "\n";
    return kProtocol;
  } catch (const FanoutError& e) {
    std::cerr << "fan-out failed: " << e.what() << "\n";
    switch (e.kind()) {
      case FanoutError::Kind::all_failed: return kUnreachable;
      case FanoutError::Kind::tbox_mismatch: return kProtocol;
      case FanoutError::Kind::invalid_plan: return kValidation;
    }
    return kProtocol;
  } catch (const MergeError& e) {
    std::cerr << "merge failed: " << e.what() << "\n";
    return kProtocol;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
