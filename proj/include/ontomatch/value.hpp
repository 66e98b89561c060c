#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

namespace ontomatch {

using json = nlohmann::json;

/// Datatype value space of the interchange format.
enum class ValueType { integer, decimal, text, boolean };

using Value = std::variant<std::int64_t, double, std::string, bool>;

/// Raised when two values cannot be compared (text vs number, ordering on booleans).
class TypeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view to_string(ValueType t);
std::optional<ValueType> value_type_from_string(std::string_view s);

bool is_numeric(const Value& v);
bool conforms(const Value& v, ValueType t);

/// Numeric values compare by magnitude (integer and decimal mix freely),
/// text lexically. Throws TypeMismatch for any other pairing.
std::partial_ordering compare_values(const Value& a, const Value& b);

/// Equality under the same typing rules; booleans compare only with booleans.
bool values_equal(const Value& a, const Value& b);

/// True for text starting with an ISO-8601 calendar date (YYYY-MM-DD).
bool is_iso_date(std::string_view s);

Value value_from_json(const json& j);
json value_to_json(const Value& v);
std::string display(const Value& v);

}  // namespace ontomatch
