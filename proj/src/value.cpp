#include "ontomatch/value.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace ontomatch {

std::string_view to_string(ValueType t) {
  switch (t) {
    case ValueType::integer: return "integer";
    case ValueType::decimal: return "decimal";
    case ValueType::text: return "text";
    case ValueType::boolean: return "boolean";
  }
  return "text";
}

std::optional<ValueType> value_type_from_string(std::string_view s) {
  if (s == "integer") return ValueType::integer;
  if (s == "decimal") return ValueType::decimal;
  if (s == "text") return ValueType::text;
  if (s == "boolean") return ValueType::boolean;
  return std::nullopt;
}

bool is_numeric(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

bool conforms(const Value& v, ValueType t) {
  switch (t) {
    case ValueType::integer: return std::holds_alternative<std::int64_t>(v);
    case ValueType::decimal: return is_numeric(v);
    case ValueType::text: return std::holds_alternative<std::string>(v);
    case ValueType::boolean: return std::holds_alternative<bool>(v);
  }
  return false;
}

namespace {

double as_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

const char* kind_name(const Value& v) {
  switch (v.index()) {
    case 0: return "integer";
    case 1: return "decimal";
    case 2: return "text";
    default: return "boolean";
  }
}

[[noreturn]] void mismatch(const Value& a, const Value& b) {
  throw TypeMismatch(std::string("cannot compare ") + kind_name(a) + " with " + kind_name(b));
}

}  // namespace

std::partial_ordering compare_values(const Value& a, const Value& b) {
  if (is_numeric(a) && is_numeric(b)) {
    const auto* ia = std::get_if<std::int64_t>(&a);
    const auto* ib = std::get_if<std::int64_t>(&b);
    if (ia && ib) return *ia <=> *ib;
    return as_double(a) <=> as_double(b);
  }
  const auto* sa = std::get_if<std::string>(&a);
  const auto* sb = std::get_if<std::string>(&b);
  if (sa && sb) return sa->compare(*sb) <=> 0;
  mismatch(a, b);
}

bool values_equal(const Value& a, const Value& b) {
  const auto* ba = std::get_if<bool>(&a);
  const auto* bb = std::get_if<bool>(&b);
  if (ba || bb) {
    if (!(ba && bb)) mismatch(a, b);
    return *ba == *bb;
  }
  return compare_values(a, b) == std::partial_ordering::equivalent;
}

bool is_iso_date(std::string_view s) {
  if (s.size() < 10) return false;
  for (std::size_t i = 0; i < 10; ++i) {
    const bool dash = (i == 4 || i == 7);
    if (dash ? s[i] != '-' : !std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return s.size() == 10 || s[10] == 'T';
}

Value value_from_json(const json& j) {
  switch (j.type()) {
    case json::value_t::number_integer: return j.get<std::int64_t>();
    case json::value_t::number_unsigned: return static_cast<std::int64_t>(j.get<std::uint64_t>());
    case json::value_t::number_float: return j.get<double>();
    case json::value_t::string: return j.get<std::string>();
    case json::value_t::boolean: return j.get<bool>();
    default: throw TypeMismatch("unsupported JSON value: " + j.dump());
  }
}

json value_to_json(const Value& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

std::string display(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os << x;
          return os.str();
        } else {
          return std::to_string(x);
        }
      },
      v);
}

}  // namespace ontomatch
