#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include "ontomatch/ontology.hpp"

namespace ontomatch::detail {

[[noreturn]] inline void malformed(std::string_view where, std::string_view what) {
  throw ValidationError({{Violation::Kind::malformed, std::string(where), std::string(what)}});
}

inline void expect_object(const json& j, std::string_view where) {
  if (!j.is_object()) malformed(where, "expected a JSON object");
}

// Rejects keys outside the allowed set.
inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                       std::string_view where) {
  expect_object(j, where);
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) malformed(where, "unknown key '" + key + "'");
  }
}

inline const json& required(const json& j, const char* key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) malformed(where, std::string("missing key '") + key + "'");
  return *it;
}

inline std::string required_string(const json& j, const char* key, std::string_view where) {
  const json& v = required(j, key, where);
  if (!v.is_string()) malformed(where, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

template <class Out>
void string_array(const json& j, const char* key, std::string_view where, Out out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_array()) malformed(where, std::string("'") + key + "' must be an array of strings");
  for (const auto& e : *it) {
    if (!e.is_string()) malformed(where, std::string("'") + key + "' must be an array of strings");
    out(e.get<std::string>());
  }
}

inline int optional_confidence(const json& j, const char* key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) return 10;
  if (!it->is_number_integer()) malformed(where, std::string("'") + key + "' must be an integer");
  return it->get<int>();
}

}  // namespace ontomatch::detail
