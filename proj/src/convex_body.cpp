#include "boxcells/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "boxcells/geometry.hpp"
#include "boxcells/linear_program.hpp"

namespace boxcells {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Generalized cross product: a vector orthogonal to the d-1 rows of `rows`.
VecQ orthogonal_complement(const MatQ& rows) {
  const Eigen::Index d = rows.cols();
  VecQ normal(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    MatQ minor(d - 1, d - 1);
    for (Eigen::Index c = 0, k = 0; c < d; ++c) {
      if (c == j) continue;
      minor.col(k++) = rows.col(c);
    }
    const Rational det = d == 1 ? Rational(1) : Rational(minor.determinant());
    normal[j] = (j % 2 == 0) ? det : Rational(-det);
  }
  return normal;
}

std::optional<VecQ> solve_exact(const MatQ& A, const VecQ& b) {
  Eigen::FullPivLU<MatQ> lu(A);
  if (!lu.isInvertible()) return std::nullopt;
  return VecQ(lu.solve(b));
}

std::vector<VecQ> polytope_vertices(const HPolytope& p) {
  const Eigen::Index d = p.dim();
  const Eigen::Index m = p.normals().rows();
  std::vector<VecQ> vertices;
  std::vector<Eigen::Index> pick(static_cast<std::size_t>(d));
  auto recurse = [&](auto&& self, Eigen::Index pos, Eigen::Index from) -> void {
    if (pos == d) {
      MatQ A(d, d);
      VecQ b(d);
      for (Eigen::Index k = 0; k < d; ++k) {
        A.row(k) = p.normals().row(pick[static_cast<std::size_t>(k)]);
        b[k] = p.offsets()[pick[static_cast<std::size_t>(k)]];
      }
      auto x = solve_exact(A, b);
      if (!x || !p.contains(*x)) return;
      for (const auto& v : vertices) {
        if (v == *x) return;
      }
      vertices.push_back(*x);
      return;
    }
    for (Eigen::Index i = from; i < m; ++i) {
      pick[static_cast<std::size_t>(pos)] = i;
      self(self, pos + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);
  return vertices;
}

// Orders coplanar points cyclically, using the two coordinates not dropped.
std::vector<VecQ> cyclic_order(std::vector<VecQ> points, Eigen::Index drop) {
  const Eigen::Index d = points.front().size();
  std::vector<Eigen::Index> axes;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (k != drop) axes.push_back(k);
  }
  VecX centroid = VecX::Zero(d);
  for (const auto& p : points) centroid += to_double(p);
  centroid /= static_cast<double>(points.size());
  auto angle = [&](const VecQ& p) {
    const VecX x = to_double(p) - centroid;
    return std::atan2(x[axes[1]], x[axes[0]]);
  };
  std::sort(points.begin(), points.end(), [&](const VecQ& a, const VecQ& b) { return angle(a) < angle(b); });
  return points;
}

Rational polygon_area(const std::vector<VecQ>& ordered) {
  Rational twice(0);
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const VecQ& a = ordered[i];
    const VecQ& b = ordered[(i + 1) % ordered.size()];
    twice += a[0] * b[1] - a[1] * b[0];
  }
  return abs(twice) / 2;
}

Rational polytope_volume(const HPolytope& p) {
  const Eigen::Index d = p.dim();
  if (d == 1) return p.upper()[0] - p.lower()[0];
  const std::vector<VecQ> vertices = polytope_vertices(p);
  if (d == 2) return polygon_area(cyclic_order(vertices, 2));

  // d == 3: fan-triangulate every facet and cone it to the interior point.
  Rational volume(0);
  std::set<std::vector<std::size_t>> seen;
  for (Eigen::Index r = 0; r < p.normals().rows(); ++r) {
    std::vector<std::size_t> on_facet;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      if (Rational(p.normals().row(r).dot(vertices[k])) == p.offsets()[r]) on_facet.push_back(k);
    }
    if (on_facet.size() < 3 || !seen.insert(on_facet).second) continue;
    Eigen::Index drop = 0;
    for (Eigen::Index k = 1; k < 3; ++k) {
      if (abs(p.normals()(r, k)) > abs(p.normals()(r, drop))) drop = k;
    }
    std::vector<VecQ> face;
    for (auto k : on_facet) face.push_back(vertices[k]);
    face = cyclic_order(std::move(face), drop);
    for (std::size_t i = 1; i + 1 < face.size(); ++i) {
      MatQ edges(3, 3);
      edges.row(0) = (face[0] - p.interior()).transpose();
      edges.row(1) = (face[i] - p.interior()).transpose();
      edges.row(2) = (face[i + 1] - p.interior()).transpose();
      volume += abs(Rational(edges.determinant())) / 6;
    }
  }
  return volume;
}

}  // namespace

HPolytope::HPolytope(MatQ normals, VecQ offsets, VecQ interior)
    : normals_(std::move(normals)), offsets_(std::move(offsets)), interior_(std::move(interior)) {
  const Eigen::Index d = normals_.cols();
  if (d < 1) throw PreconditionError("polytope dimension must be at least 1");
  if (normals_.rows() != offsets_.size() || interior_.size() != d) {
    throw PreconditionError("polytope rows, offsets and interior point disagree in size");
  }
  const VecQ slack = offsets_ - normals_ * interior_;
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    if (!(slack[i] > 0)) throw PreconditionError("interior point is not strictly inside the polytope");
  }
  lower_.resize(d);
  upper_.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    VecQ unit = VecQ::Zero(d);
    unit[k] = 1;
    const LpResult hi = maximize_free(normals_, offsets_, unit);
    const LpResult lo = maximize_free(normals_, offsets_, -unit);
    if (hi.status != LpStatus::optimal || lo.status != LpStatus::optimal) {
      throw PreconditionError("polytope is unbounded");
    }
    upper_[k] = hi.value;
    lower_[k] = -lo.value;
  }
}

HPolytope HPolytope::simplex(const std::vector<VecQ>& vertices) {
  if (vertices.empty()) throw PreconditionError("simplex needs vertices");
  const Eigen::Index d = vertices.front().size();
  if (static_cast<Eigen::Index>(vertices.size()) != d + 1) throw PreconditionError("simplex needs d+1 vertices");
  VecQ centroid = VecQ::Zero(d);
  for (const auto& v : vertices) centroid += v;
  centroid /= Rational(d + 1);
  MatQ normals(d + 1, d);
  VecQ offsets(d + 1);
  for (Eigen::Index i = 0; i <= d; ++i) {
    // Facet opposite vertex i.
    std::vector<const VecQ*> facet;
    for (Eigen::Index j = 0; j <= d; ++j) {
      if (j != i) facet.push_back(&vertices[static_cast<std::size_t>(j)]);
    }
    MatQ edges(d - 1, d);
    for (Eigen::Index k = 1; k < d; ++k) edges.row(k - 1) = (*facet[static_cast<std::size_t>(k)] - *facet[0]).transpose();
    VecQ a = orthogonal_complement(edges);
    Rational b = a.dot(*facet[0]);
    const Rational at_opposite = a.dot(vertices[static_cast<std::size_t>(i)]);
    if (at_opposite == b) throw PreconditionError("simplex vertices are affinely dependent");
    if (at_opposite > b) {
      a = -a;
      b = -b;
    }
    normals.row(i) = a.transpose();
    offsets[i] = b;
  }
  return HPolytope(std::move(normals), std::move(offsets), std::move(centroid));
}

HPolytope HPolytope::box(const VecQ& lower, const VecQ& upper) {
  const Eigen::Index d = lower.size();
  MatQ normals(2 * d, d);
  normals << MatQ::Identity(d, d), -MatQ::Identity(d, d);
  VecQ offsets(2 * d);
  offsets << upper, -lower;
  return HPolytope(std::move(normals), std::move(offsets), VecQ((lower + upper) / Rational(2)));
}

bool HPolytope::contains(const VecQ& x) const {
  const VecQ values = normals_ * x;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] > offsets_[i]) return false;
  }
  return true;
}

void SlabBox::validate() const {
  if (normal.size() < 1) throw PreconditionError("slab normal must be nonempty");
  if ((normal.array() == Rational(0)).all()) throw PreconditionError("slab normal must be nonzero");
  if (side < 1) throw PreconditionError("slab box side must be at least 1");
  if (!(lower < upper)) throw PreconditionError("slab needs lower < upper");
  Rational lowest(0);
  Rational highest(0);
  for (Eigen::Index i = 0; i < normal.size(); ++i) {
    if (normal[i] < 0) lowest += normal[i] * side;
    else highest += normal[i] * side;
  }
  if (!(lower < highest && upper > lowest)) throw PreconditionError("slab misses the interior of the box");
}

Ball make_ball(VecX center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw PreconditionError("ball radius must be positive");
  if (center.size() < 1) throw PreconditionError("ball center must be nonempty");
  return Ball{std::move(center), radius};
}

SlabBox make_slab_box(VecQ normal, Rational lower, Rational upper, std::int64_t side) {
  SlabBox slab{std::move(normal), std::move(lower), std::move(upper), side};
  slab.validate();
  return slab;
}

Eigen::Index dimension(const ConvexBody& body) {
  return std::visit(overloaded{[](const Ball& b) { return b.center.size(); },
                               [](const HPolytope& p) { return p.dim(); },
                               [](const SlabBox& s) { return s.normal.size(); }},
                    body);
}

bool contains_lattice_point(const ConvexBody& body, const VecZ& x) {
  return std::visit(overloaded{[&](const Ball& b) { return (x.cast<double>() - b.center).squaredNorm() <= b.radius * b.radius; },
                               [&](const HPolytope& p) { return p.contains(to_rational(x)); },
                               [&](const SlabBox& s) {
                                 if ((x.array() < 0).any() || (x.array() > s.side).any()) return false;
                                 const Rational level = s.normal.dot(to_rational(x));
                                 return s.lower <= level && level <= s.upper;
                               }},
                    body);
}

bool contains_point(const ConvexBody& body, const VecX& x) {
  return std::visit(overloaded{[&](const Ball& b) { return (x - b.center).squaredNorm() <= b.radius * b.radius; },
                               [&](const HPolytope& p) { return p.contains(to_rational(x)); },
                               [&](const SlabBox& s) {
                                 if ((x.array() < 0.0).any() || (x.array() > static_cast<double>(s.side)).any()) return false;
                                 const Rational level = s.normal.dot(to_rational(x));
                                 return s.lower <= level && level <= s.upper;
                               }},
                    body);
}

IntegerBox lattice_bounds(const ConvexBody& body) {
  return std::visit(
      overloaded{[](const Ball& b) {
                   IntegerBox box{VecZ(b.center.size()), VecZ(b.center.size())};
                   for (Eigen::Index i = 0; i < b.center.size(); ++i) {
                     box.lo[i] = static_cast<std::int64_t>(std::floor(b.center[i] - b.radius));
                     box.hi[i] = static_cast<std::int64_t>(std::ceil(b.center[i] + b.radius));
                   }
                   return box;
                 },
                 [](const HPolytope& p) {
                   IntegerBox box{VecZ(p.dim()), VecZ(p.dim())};
                   for (Eigen::Index i = 0; i < p.dim(); ++i) {
                     box.lo[i] = to_int64(floor_rational(p.lower()[i]));
                     box.hi[i] = to_int64(ceil_rational(p.upper()[i]));
                   }
                   return box;
                 },
                 [](const SlabBox& s) {
                   return IntegerBox{VecZ::Zero(s.normal.size()), VecZ::Constant(s.normal.size(), s.side)};
                 }},
      body);
}

std::pair<VecX, VecX> real_bounds(const ConvexBody& body) {
  return std::visit(overloaded{[](const Ball& b) {
                                 return std::pair{VecX(b.center.array() - b.radius), VecX(b.center.array() + b.radius)};
                               },
                               [](const HPolytope& p) { return std::pair{to_double(p.lower()), to_double(p.upper())}; },
                               [](const SlabBox& s) {
                                 const auto d = s.normal.size();
                                 return std::pair{VecX(VecX::Zero(d)), VecX(VecX::Constant(d, static_cast<double>(s.side)))};
                               }},
                    body);
}

double ball_volume(int dim, double radius) {
  return std::pow(std::numbers::pi, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0) * std::pow(radius, dim);
}

std::optional<Rational> exact_rational_volume(const ConvexBody& body) {
  return std::visit(overloaded{[](const Ball&) -> std::optional<Rational> { return std::nullopt; },
                               [](const HPolytope& p) -> std::optional<Rational> {
                                 if (p.dim() > 3) return std::nullopt;
                                 return polytope_volume(p);
                               },
                               [](const SlabBox& s) -> std::optional<Rational> {
                                 const Slab<Rational> slab{s.normal, s.upper, Rational(s.upper - s.lower)};
                                 return strip_volume(slab, Rational(s.side));
                               }},
                    body);
}

std::optional<double> exact_volume(const ConvexBody& body) {
  if (const auto* ball = std::get_if<Ball>(&body)) {
    return ball_volume(static_cast<int>(ball->center.size()), ball->radius);
  }
  if (auto q = exact_rational_volume(body)) return to_double(*q);
  return std::nullopt;
}

VecQ interior_point(const ConvexBody& body) {
  return std::visit(overloaded{[](const Ball& b) { return to_rational(b.center); },
                               [](const HPolytope& p) { return p.interior(); },
                               [](const SlabBox& s) {
                                 // Reflect to a nonnegative normal, walk the diagonal to the
                                 // middle of the admissible levels, reflect back.
                                 const Eigen::Index d = s.normal.size();
                                 const Rational n(s.side);
                                 Rational shift(0);
                                 Rational total(0);
                                 for (Eigen::Index i = 0; i < d; ++i) {
                                   if (s.normal[i] < 0) shift -= s.normal[i] * n;
                                   total += abs(s.normal[i]);
                                 }
                                 const Rational lo = std::max(Rational(s.lower + shift), Rational(0));
                                 const Rational hi = std::min(Rational(s.upper + shift), Rational(n * total));
                                 const Rational level = (lo + hi) / 2;
                                 const Rational along = level / total;
                                 VecQ x(d);
                                 for (Eigen::Index i = 0; i < d; ++i) {
                                   if (s.normal[i] == 0) x[i] = n / 2;
                                   else if (s.normal[i] > 0) x[i] = along;
                                   else x[i] = n - along;
                                 }
                                 return x;
                               }},
                    body);
}

HPolytope as_hpolytope(const SlabBox& slab) {
  slab.validate();
  const Eigen::Index d = slab.normal.size();
  MatQ normals(2 * d + 2, d);
  normals << MatQ::Identity(d, d), -MatQ::Identity(d, d), slab.normal.transpose(), -slab.normal.transpose();
  VecQ offsets(2 * d + 2);
  offsets << VecQ::Constant(d, Rational(slab.side)), VecQ::Zero(d), slab.upper, -slab.lower;
  return HPolytope(std::move(normals), std::move(offsets), interior_point(slab));
}

HPolytope in_basis_coordinates(const ConvexBody& body, const MatZ& basis) {
  const HPolytope p = std::visit(overloaded{[](const Ball&) -> HPolytope {
                                              throw PreconditionError("F-cells of a ball are not supported");
                                            },
                                            [](const HPolytope& q) { return q; },
                                            [](const SlabBox& s) { return as_hpolytope(s); }},
                                 body);
  if (basis.rows() != p.dim() || basis.cols() != p.dim()) throw PreconditionError("basis dimension mismatch");
  const MatQ F = to_rational(basis);
  const Rational det = F.determinant();
  if (abs(det) != 1) throw PreconditionError("basis is not unimodular");
  // x = F^T y, so a.x <= b reads (F a).y <= b.
  MatQ normals = p.normals() * F.transpose();
  VecQ interior = F.transpose().fullPivLu().solve(p.interior());
  return HPolytope(std::move(normals), p.offsets(), std::move(interior));
}

ConvexBody shrink_about(const ConvexBody& body, const VecQ& center, const Rational& factor) {
  if (!(factor > 0)) throw PreconditionError("shrink factor must be positive");
  if (const auto* ball = std::get_if<Ball>(&body)) {
    const VecX c = to_double(center);
    const double f = to_double(factor);
    return make_ball(c + f * (ball->center - c), f * ball->radius);
  }
  const HPolytope p = std::holds_alternative<SlabBox>(body) ? as_hpolytope(std::get<SlabBox>(body))
                                                               : std::get<HPolytope>(body);
  // x in K  <=>  center + (x - center)/factor in L  <=>  a.x <= factor b + (1 - factor) a.center
  VecQ offsets = factor * p.offsets() + (Rational(1) - factor) * (p.normals() * center);
  VecQ interior = center + factor * (p.interior() - center);
  return HPolytope(p.normals(), std::move(offsets), std::move(interior));
}

}  // namespace boxcells
