#pragma once

#include "dfan/division.hpp"
#include "dfan/oracle.hpp"
#include "dfan/vfilt.hpp"

#include "json.hpp"

namespace dfan {

// Deterministic JSON views of the pipeline values. Keys keep insertion
// order, rationals become plain integers when exact and "a/b" strings
// otherwise, operators are printed through the canonical printer, so equal
// values always serialize to identical bytes.
using Json = nlohmann::ordered_json;

Json json_of(const Rational& r);
Json json_of(const Slope& s); // "inf" at the right boundary
Json json_of(const SlopeInterval& iv);
Json json_of(const VForm& L); // multiplier list
Json json_of(const ExponentVector& e); // flat exponent list
Json json_of(const MarkedBasis& b);
Json json_of(const FanCell& cell);
Json json_of(const VGroebnerFan& fan);
Json json_of(const DivisionResult& d);
Json json_of(const ReductionTrace& t);
Json json_of(const OracleAnswer& a);
Json json_of(const VbarAnswer& a, const std::vector<VForm>& skeleton);

} // namespace dfan
