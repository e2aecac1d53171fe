#include "boxcells/geometry.hpp"

#include <random>

#include "boxcells/nelder_mead.hpp"
#include "boxcells/parallel.hpp"

namespace boxcells {

Rational vd_of_ones(int dim) {
  if (dim < 1) throw PreconditionError("dimension must be at least 1");
  return vd_of_direction<Rational>(VecQ::Ones(dim));
}

namespace {

VecX direction_from_params(const Eigen::VectorXd& u) {
  VecX w(u.size() + 1);
  w.head(u.size()) = u.array().exp().matrix();
  w[u.size()] = 1.0;
  return w / w.norm();
}

bool lexicographically_less(const VecX& a, const VecX& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

VdMaxResult vd_max(int dim, const VdMaxOptions& options) {
  if (dim < 2) throw PreconditionError("vd_max needs d >= 2");
  if (dim > kMaxFloatDimension) throw PreconditionError("vd_max is limited to d <= 64");
  if (options.starts < 1) throw PreconditionError("vd_max needs at least one start");

  auto objective = [](const Eigen::VectorXd& u) {
    // Far-out parameters underflow a coordinate to zero, which the objective
    // handles as a lower-dimensional prism; clamp to keep it finite anyway.
    const Eigen::VectorXd clamped = u.cwiseMax(-40.0).cwiseMin(40.0);
    return -vd_of_direction<double>(direction_from_params(clamped));
  };

  const auto starts = static_cast<std::size_t>(options.starts);
  std::vector<VdMaxResult> runs(starts);
  parallel_for(starts, [&](std::size_t index) {
    std::seed_seq seq{static_cast<std::uint64_t>(options.seed), static_cast<std::uint64_t>(index)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uniform(-1.5, 1.5);
    Eigen::VectorXd u(dim - 1);
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = uniform(rng);

    const int budget = std::max(1, options.max_evaluations / options.starts);
    NelderMeadResult nm = nelder_mead(objective, u, 0.5, options.tolerance, budget);
    int evaluations = nm.evaluations;
    // Restarting from the incumbent guards against a collapsed simplex.
    double step = 0.05;
    for (int polish = 0; polish < 4 && evaluations < budget; ++polish, step *= 0.1) {
      NelderMeadResult again = nelder_mead(objective, nm.x, step, options.tolerance, budget - evaluations);
      evaluations += again.evaluations;
      const bool improved = again.value < nm.value - options.tolerance;
      if (again.value <= nm.value) nm = again;
      if (!improved) break;
    }

    VdMaxResult& out = runs[index];
    out.direction = direction_from_params(nm.x.cwiseMax(-40.0).cwiseMin(40.0));
    out.value = -nm.value;
    out.converged = nm.converged;
    out.evaluations = evaluations;
  });

  double top = runs.front().value;
  for (const auto& run : runs) top = std::max(top, run.value);
  VdMaxResult result;
  result.value = -1.0;
  for (const auto& run : runs) {
    result.evaluations += run.evaluations;
    if (run.converged) ++result.converged_starts;
    if (run.value < top - 1e-9) continue;
    if (result.value < 0.0 || lexicographically_less(run.direction, result.direction)) {
      result.direction = run.direction;
      result.value = run.value;
      result.converged = run.converged;
    }
  }
  return result;
}

}  // namespace boxcells
