#include "boxcells/report.hpp"

#include <cmath>
#include <limits>

namespace boxcells {

Json to_json(const Rational& q) { return to_string(q); }
Json to_json(const BigInt& z) {
  if (z >= std::numeric_limits<std::int64_t>::min() && z <= std::numeric_limits<std::int64_t>::max()) {
    return z.convert_to<std::int64_t>();
  }
  return to_string(z);
}
Json to_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(const VecQ& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

Json to_json(const VecX& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

Json to_json(const VecZ& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json to_json(const MatZ& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(VecZ(m.row(i).transpose())));
  return out;
}

Json body_json(const ConvexBody& body) {
  if (const auto* ball = std::get_if<Ball>(&body)) {
    return {{"type", "ball"}, {"center", to_json(ball->center)}, {"radius", to_json(ball->radius)}};
  }
  if (const auto* poly = std::get_if<HPolytope>(&body)) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < poly->normals().rows(); ++r) {
      rows.push_back({{"a", to_json(VecQ(poly->normals().row(r).transpose()))}, {"b", to_json(poly->offsets()[r])}});
    }
    return {{"type", "polytope"}, {"rows", rows}, {"interior", to_json(poly->interior())}};
  }
  const auto& slab = std::get<SlabBox>(body);
  return {{"type", "slab"},
          {"normal", to_json(slab.normal)},
          {"lower", to_json(slab.lower)},
          {"upper", to_json(slab.upper)},
          {"side", slab.side}};
}

Json cell_report(const ConvexBody& body, const ClassCounts& counts, bool eq_elem_ok) {
  Json out{{"body", body_json(body)},
           {"inside", to_json(counts.inside)},
           {"boundary", to_json(counts.boundary)},
           {"lattice", to_json(counts.lattice)},
           {"volume", counts.volume ? to_json(*counts.volume) : Json(nullptr)},
           {"eq_elem_ok", eq_elem_ok}};
  if (counts.exact_volume) out["volume_exact"] = to_json(*counts.exact_volume);
  return out;
}

Json basis_report(const WellPosition& position) {
  return {{"gamma", to_json(position.box.gamma)},
          {"volK", to_json(position.volume_body)},
          {"volBox", to_json(position.volume_box)},
          {"ratio", to_json(position.ratio)},
          {"standard_ratio", to_json(position.standard_ratio)},
          {"basis", to_json(position.basis)},
          {"used_fallback", position.used_fallback},
          {"ellipsoid_degenerate", position.ellipsoid_degenerate}};
}

}  // namespace boxcells
