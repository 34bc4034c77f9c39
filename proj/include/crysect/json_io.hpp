#pragma once

#include "crysect/deformation.hpp"
#include "crysect/qlattice.hpp"

#include "json.hpp"

#include <string>

namespace crysect {

using json = nlohmann::json;

// Scalars travel as {"a": [...], "b": [...]} with little-endian base-p digit
// arrays, trailing zeros trimmed; a bare integer is accepted as shorthand.
json scalar_to_json(const WittScalar& s);
WittScalar scalar_from_json(const WittRing& r, const json& j);

// Curve files: {"a","b","c","beta","tails":{"x","y","z"},"tprec"} with a+b=2c
// (c may be omitted) and unit beta.
json curve_to_json(const FormalCurve& cv);
FormalCurve curve_from_json(const WittRing& r, const json& j);

// Form files: {"rank": r, "upper": [[...], ...]} with zero entries below the
// diagonal.
json form_to_json(const QuadLattice& L);
QuadLattice form_from_json(const json& j);

// {"pdenom": k, "terms": [{"e": [a,b,c], "a": [...], "b": [...]}, ...]} in
// exponent-key order.
json series_to_json(const TruncatedSeries& s);

json tval_to_json(const TVal& t);
json profile_to_json(const DecayProfile& pr);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

}  // namespace crysect
