#pragma once

// JSON rendering of results. Rationals are written as "p/q" strings, big
// integers as numbers while they fit in 64 bits (decimal strings beyond) and
// doubles as round-trip numbers.

#include <nlohmann/json.hpp>

#include "boxcells/basis_reduction.hpp"
#include "boxcells/cells.hpp"

namespace boxcells {

using Json = nlohmann::json;

Json to_json(const Rational& q);
Json to_json(const BigInt& z);
Json to_json(double x);
Json to_json(const VecQ& v);
Json to_json(const VecX& v);
Json to_json(const VecZ& v);
Json to_json(const MatZ& m);

Json body_json(const ConvexBody& body);

/// {"body", "inside", "boundary", "lattice", "volume", "eq_elem_ok"}
Json cell_report(const ConvexBody& body, const ClassCounts& counts, bool eq_elem_ok);

/// {"gamma", "volK", "volBox", "ratio", "basis"}
Json basis_report(const WellPosition& position);

}  // namespace boxcells
