#pragma once

#include <string>

#include <json.hpp>

namespace kgbench {

// Node/edge attribute payloads: null, booleans, integers, floats, text,
// and arbitrarily nested lists/maps of the same. Backed by nlohmann::json,
// which preserves the integer/float distinction and nesting exactly across
// serialization round-trips.
using PropertyValue = nlohmann::json;

inline bool is_numeric(const PropertyValue& v) {
    return v.is_number_integer() || v.is_number_unsigned() || v.is_number_float();
}

inline double as_double(const PropertyValue& v) {
    return v.get<double>();
}

// Equality with integer -> float coercion for numerics; exact otherwise.
inline bool scalar_equal(const PropertyValue& a, const PropertyValue& b) {
    if (is_numeric(a) && is_numeric(b)) return as_double(a) == as_double(b);
    return a == b;
}

// Canonical hash-index key for a scalar value. Numerics collapse to their
// double representation so that 60 and 60.0 land in the same bucket.
inline std::string scalar_key(const PropertyValue& v) {
    if (is_numeric(v)) return "n:" + PropertyValue(as_double(v)).dump();
    return "v:" + v.dump();
}

}  // namespace kgbench
