#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace boxcells {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes `f` with the adaptive-coefficient Nelder-Mead simplex method.
/// Stops when both the spread of simplex values and the simplex diameter
/// (infinity norm) drop below `tolerance`.
template <typename Objective>
NelderMeadResult nelder_mead(Objective&& f, const Eigen::VectorXd& start, double initial_step, double tolerance,
                             int max_evaluations) {
  const Eigen::Index n = start.size();
  const double dim = static_cast<double>(std::max<Eigen::Index>(n, 1));
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dim;
  const double contract = 0.75 - 1.0 / (2.0 * dim);
  const double shrink = 1.0 - 1.0 / dim;

  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), start);
  std::vector<double> values(simplex.size());
  for (Eigen::Index i = 0; i < n; ++i) simplex[static_cast<std::size_t>(i + 1)][i] += initial_step;

  NelderMeadResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    return f(x);
  };
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (const auto& p : simplex) diameter = std::max(diameter, (p - simplex[best]).lpNorm<Eigen::Infinity>());
    if (values[worst] - values[best] <= tolerance && diameter <= tolerance) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= max_evaluations) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= dim;

    const Eigen::VectorXd reflected = centroid + reflect * (centroid - simplex[worst]);
    const double f_reflected = eval(reflected);
    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded = centroid + expand * (reflected - centroid);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + contract * (reflected - centroid))
                                               : Eigen::VectorXd(centroid + contract * (simplex[worst] - centroid));
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + shrink * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace boxcells
