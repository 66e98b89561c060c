#include "ontomatch/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "json_util.hpp"

namespace ontomatch {

using detail::check_keys;
using detail::malformed;

const ClassDef* OntologySchema::find_class(std::string_view name) const {
  for (const auto& c : classes)
    if (c.name == name) return &c;
  return nullptr;
}

const PropertyDef* OntologySchema::find_property(std::string_view name) const {
  for (const auto& p : properties)
    if (p.name == name) return &p;
  return nullptr;
}

std::size_t OntologySchema::count_properties(PropertyKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(properties.begin(), properties.end(), [&](const auto& p) { return p.kind == kind; }));
}

std::string_view to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::duplicate: return "duplicate";
    case Violation::Kind::unknown_class: return "unknown-class";
    case Violation::Kind::unknown_property: return "unknown-property";
    case Violation::Kind::range: return "range";
    case Violation::Kind::cardinality: return "cardinality";
    case Violation::Kind::invalid_axiom: return "invalid-axiom";
    case Violation::Kind::invalid_property: return "invalid-property";
    case Violation::Kind::malformed: return "malformed";
  }
  return "malformed";
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

std::string summarize(const std::vector<Violation>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += "; ";
    out += std::string(to_string(v.kind)) + " '" + v.name + "': " + v.message;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(summarize(violations)), violations_(std::move(violations)) {}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate_schema(const OntologySchema& schema) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  if (schema.uri.empty()) out.push_back({K::malformed, "uri", "ontology uri must not be empty"});

  std::set<std::string> class_names;
  for (const auto& c : schema.classes) {
    if (c.name.empty()) out.push_back({K::malformed, c.name, "class name must not be empty"});
    if (!class_names.insert(c.name).second) out.push_back({K::duplicate, c.name, "class declared twice"});
  }
  std::set<std::string> property_names;
  for (const auto& p : schema.properties) {
    if (p.name.empty()) out.push_back({K::malformed, p.name, "property name must not be empty"});
    if (!property_names.insert(p.name).second)
      out.push_back({K::duplicate, p.name, "property declared twice"});
  }

  auto check_refs = [&](const ClassDef& c, const std::set<std::string>& refs, const char* axiom) {
    for (const auto& r : refs) {
      if (!class_names.count(r))
        out.push_back({K::unknown_class, r, std::string(axiom) + " of '" + c.name + "' names an undeclared class"});
    }
  };
  for (const auto& c : schema.classes) {
    check_refs(c, c.equivalent_to, "equivalent_to");
    check_refs(c, c.subclass_of, "subclass_of");
    check_refs(c, c.disjoint_with, "disjoint_with");
    if (c.disjoint_with.count(c.name)) out.push_back({K::invalid_axiom, c.name, "class declared disjoint with itself"});
  }

  for (const auto& p : schema.properties) {
    if (p.kind == PropertyKind::object && !class_names.count(p.range_class))
      out.push_back({K::unknown_class, p.range_class, "range of object property '" + p.name + "' is undeclared"});
    if (p.inverse_of) {
      if (p.kind != PropertyKind::object) {
        out.push_back({K::invalid_property, p.name, "inverse_of is only allowed on object properties"});
      } else if (const auto* q = schema.find_property(*p.inverse_of)) {
        if (q->kind != PropertyKind::object)
          out.push_back({K::invalid_property, p.name, "inverse '" + q->name + "' is not an object property"});
        else if (q->inverse_of && *q->inverse_of != p.name)
          out.push_back({K::invalid_property, p.name, "inverse '" + q->name + "' names a different inverse"});
      }
    }
    if (p.functional && p.max_cardinality && *p.max_cardinality != 1)
      out.push_back({K::invalid_property, p.name, "functional property requires max_cardinality 1"});
  }
  return out;
}

std::vector<Violation> validate_instance(const OntologySchema& schema, const Instance& instance) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  if (instance.id.empty()) out.push_back({K::malformed, instance.id, "instance id must not be empty"});
  if (!schema.find_class(instance.class_name))
    out.push_back({K::unknown_class, instance.class_name, "instance '" + instance.id + "' has an undeclared class"});

  for (const auto& [name, values] : instance.values) {
    const PropertyDef* p = schema.find_property(name);
    if (!p) {
      out.push_back({K::unknown_property, name, "instance '" + instance.id + "' uses an undeclared property"});
      continue;
    }
    for (const auto& v : values) {
      const bool ok = p->kind == PropertyKind::object ? std::holds_alternative<std::string>(v)
                                                      : conforms(v, p->datatype);
      if (!ok) {
        const std::string expected =
            p->kind == PropertyKind::object ? "identifier of " + p->range_class : std::string(to_string(p->datatype));
        out.push_back({K::range, name, "value '" + display(v) + "' of instance '" + instance.id + "' is not " + expected});
      }
    }
    std::size_t limit = values.size();
    if (p->single_valued()) limit = 1;
    if (p->max_cardinality) limit = std::min<std::size_t>(limit, *p->max_cardinality);
    if (values.size() > limit)
      out.push_back({K::cardinality, name,
                     "instance '" + instance.id + "' asserts " + std::to_string(values.size()) +
                         " values, at most " + std::to_string(limit) + " allowed"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON <-> model

namespace {

ClassDef class_from_json(const json& j) {
  check_keys(j, {"name", "equivalent_to", "subclass_of", "disjoint_with"}, "class");
  ClassDef c;
  c.name = detail::required_string(j, "name", "class");
  detail::string_array(j, "equivalent_to", c.name, [&](std::string s) { c.equivalent_to.insert(std::move(s)); });
  detail::string_array(j, "subclass_of", c.name, [&](std::string s) { c.subclass_of.insert(std::move(s)); });
  detail::string_array(j, "disjoint_with", c.name, [&](std::string s) { c.disjoint_with.insert(std::move(s)); });
  return c;
}

PropertyDef property_from_json(const json& j) {
  check_keys(j, {"name", "kind", "range", "functional", "inverse_of", "max_cardinality"}, "property");
  PropertyDef p;
  p.name = detail::required_string(j, "name", "property");
  const std::string kind = detail::required_string(j, "kind", p.name);
  const std::string range = detail::required_string(j, "range", p.name);
  if (kind == "datatype") {
    p.kind = PropertyKind::datatype;
    auto t = value_type_from_string(range);
    if (!t)
      throw ValidationError({{Violation::Kind::range, p.name, "unknown datatype range '" + range + "'"}});
    p.datatype = *t;
  } else if (kind == "object") {
    p.kind = PropertyKind::object;
    p.range_class = range;
  } else {
    malformed(p.name, "kind must be \"datatype\" or \"object\"");
  }
  if (auto it = j.find("functional"); it != j.end()) {
    if (!it->is_boolean()) malformed(p.name, "'functional' must be a boolean");
    p.functional = it->get<bool>();
  }
  if (auto it = j.find("inverse_of"); it != j.end()) {
    if (!it->is_string()) malformed(p.name, "'inverse_of' must be a string");
    p.inverse_of = it->get<std::string>();
  }
  if (auto it = j.find("max_cardinality"); it != j.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
      malformed(p.name, "'max_cardinality' must be a non-negative integer");
    p.max_cardinality = it->get<std::uint32_t>();
  }
  return p;
}

json property_to_json(const PropertyDef& p) {
  json j = {{"name", p.name},
            {"kind", p.kind == PropertyKind::object ? "object" : "datatype"},
            {"range", p.kind == PropertyKind::object ? p.range_class : std::string(to_string(p.datatype))}};
  if (p.functional) j["functional"] = true;
  if (p.inverse_of) j["inverse_of"] = *p.inverse_of;
  if (p.max_cardinality) j["max_cardinality"] = *p.max_cardinality;
  return j;
}

json class_to_json(const ClassDef& c) {
  json j = {{"name", c.name}};
  if (!c.equivalent_to.empty()) j["equivalent_to"] = c.equivalent_to;
  if (!c.subclass_of.empty()) j["subclass_of"] = c.subclass_of;
  if (!c.disjoint_with.empty()) j["disjoint_with"] = c.disjoint_with;
  return j;
}

// Declared inverses are stored on both sides.
void complete_inverses(OntologySchema& schema) {
  for (auto& p : schema.properties) {
    if (!p.inverse_of) continue;
    for (auto& q : schema.properties) {
      if (q.name == *p.inverse_of && !q.inverse_of) q.inverse_of = p.name;
    }
  }
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Instance instance_from_json(const json& j) {
  check_keys(j, {"id", "class", "values", "categories"}, "instance");
  Instance i;
  i.id = detail::required_string(j, "id", "instance");
  i.class_name = detail::required_string(j, "class", i.id);
  if (auto it = j.find("values"); it != j.end()) {
    if (!it->is_object()) malformed(i.id, "'values' must be an object");
    for (const auto& [name, v] : it->items()) {
      std::vector<Value> vals;
      try {
        if (v.is_array()) {
          for (const auto& e : v) vals.push_back(value_from_json(e));
        } else {
          vals.push_back(value_from_json(v));
        }
      } catch (const TypeMismatch& e) {
        throw ValidationError({{Violation::Kind::range, name, e.what()}});
      }
      if (!vals.empty()) i.values.emplace(name, std::move(vals));
    }
  }
  detail::string_array(j, "categories", i.id, [&](std::string s) { i.categories.insert(std::move(s)); });
  return i;
}

json values_to_json(const PropertyValues& values) {
  json out = json::object();
  for (const auto& [name, vs] : values) {
    if (vs.size() == 1) {
      out[name] = value_to_json(vs.front());
    } else {
      json arr = json::array();
      for (const auto& v : vs) arr.push_back(value_to_json(v));
      out[name] = std::move(arr);
    }
  }
  return out;
}

json instance_to_json(const Instance& instance) {
  json j = {{"id", instance.id}, {"class", instance.class_name}, {"values", values_to_json(instance.values)}};
  if (!instance.categories.empty()) j["categories"] = instance.categories;
  return j;
}

OntologyDocument ontology_from_json(const json& doc) {
  check_keys(doc, {"uri", "keywords", "classes", "properties", "instances"}, "document");
  OntologyDocument out;
  auto& schema = out.schema;
  schema.uri = detail::required_string(doc, "uri", "document");
  detail::string_array(doc, "keywords", "document", [&](std::string s) { schema.keywords.push_back(lowercase(s)); });

  auto array_of = [&](const char* key) -> const json* {
    auto it = doc.find(key);
    if (it == doc.end()) return nullptr;
    if (!it->is_array()) malformed("document", std::string("'") + key + "' must be an array");
    return &*it;
  };
  if (const json* cs = array_of("classes"))
    for (const auto& c : *cs) schema.classes.push_back(class_from_json(c));
  if (const json* ps = array_of("properties"))
    for (const auto& p : *ps) schema.properties.push_back(property_from_json(p));

  if (auto violations = validate_schema(schema); !violations.empty()) throw ValidationError(std::move(violations));
  complete_inverses(schema);

  std::vector<Violation> violations;
  std::set<std::string> ids;
  if (const json* is = array_of("instances")) {
    for (const auto& ij : *is) {
      Instance inst = instance_from_json(ij);
      if (!ids.insert(inst.id).second)
        violations.push_back({Violation::Kind::duplicate, inst.id, "instance id declared twice"});
      auto vs = validate_instance(schema, inst);
      violations.insert(violations.end(), vs.begin(), vs.end());
      out.instances.push_back(std::move(inst));
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return out;
}

OntologyDocument parse_ontology(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_and_column(document, e.byte);
    throw ParseError(e.what(), line, col);
  }
  return ontology_from_json(doc);
}

OntologyDocument load_ontology_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ontology(ss.str());
}

json ontology_to_json(const OntologyDocument& doc) {
  json classes = json::array();
  for (const auto& c : doc.schema.classes) classes.push_back(class_to_json(c));
  json properties = json::array();
  for (const auto& p : doc.schema.properties) properties.push_back(property_to_json(p));
  json instances = json::array();
  for (const auto& i : doc.instances) instances.push_back(instance_to_json(i));
  return {{"uri", doc.schema.uri},
          {"keywords", doc.schema.keywords},
          {"classes", std::move(classes)},
          {"properties", std::move(properties)},
          {"instances", std::move(instances)}};
}

std::string serialize_ontology(const OntologyDocument& doc) { return ontology_to_json(doc).dump(2); }

// ---------------------------------------------------------------------------
// Fingerprint

std::string tbox_fingerprint(const OntologySchema& schema) {
  std::vector<std::string> lines;
  auto pair_line = [&](const char* tag, const std::string& a, const std::string& b, bool symmetric) {
    if (symmetric && b < a) {
      lines.push_back(std::string(tag) + ' ' + b + ' ' + a);
    } else {
      lines.push_back(std::string(tag) + ' ' + a + ' ' + b);
    }
  };
  for (const auto& c : schema.classes) {
    lines.push_back("class " + c.name);
    for (const auto& e : c.equivalent_to)
      if (e != c.name) pair_line("equivalent", c.name, e, true);
    for (const auto& s : c.subclass_of) pair_line("subclass", c.name, s, false);
    for (const auto& d : c.disjoint_with) pair_line("disjoint", c.name, d, true);
  }
  for (const auto& p : schema.properties) {
    std::string l = "property " + p.name + (p.kind == PropertyKind::object ? " object " + p.range_class
                                                                          : " datatype " + std::string(to_string(p.datatype)));
    l += p.functional ? " functional" : " -";
    l += p.max_cardinality ? " max=" + std::to_string(*p.max_cardinality) : " -";
    lines.push_back(std::move(l));
    if (p.inverse_of) pair_line("inverse", p.name, *p.inverse_of, true);
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());

  std::string canonical;
  for (const auto& l : lines) {
    canonical += l;
    canonical += '\n';
  }

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

}  // namespace ontomatch
