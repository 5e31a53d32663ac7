#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qdcert/diophantine.hpp"
#include "qdcert/gns.hpp"
#include "qdcert/quotient.hpp"

namespace qdcert {

using Json = nlohmann::json;

// {"d": 3, "entries": [{"i":1,"j":2,"v":1}, ...]}, nonzero entries only,
// 1-based indices. Values outside the int64 range are written as strings.
Json to_json(const UniTri& a);
UniTri unitri_from_json(const Json& j);

// {"kind":"quadratic","a":-1,"b":1,"D":5,"c":2} | {"kind":"rational","p":1,"q":3}
// | {"kind":"decimal","value":"0.739"}; optional "precision_bits".
Json to_json(const ThetaSpec& t);
ThetaSpec theta_from_json(const Json& j);

// {"n":..., "m":..., "size_Kn":..., "size_Fn":..., "property4_verified":...}
Json folner_summary(const FolnerData& fd);

// [{"key": <element>, "re": ..., "im": ...}, ...] sorted by key text
Json to_json(const SparseVec& v);

Json int_to_json(const Int& v);
Int int_from_json(const Json& j);

// Sorted keys, no whitespace, doubles with 17 significant digits. Two equal
// documents always serialize to the same bytes.
std::string canonical_dump(const Json& j);
std::string format_double(double v);

}  // namespace qdcert
