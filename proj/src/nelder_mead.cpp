#include "hardylab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hardylab {

namespace {

struct Simplex {
  std::vector<std::vector<double>> pts;
  std::vector<double> vals;
};

double safe_eval(const Objective& f, const std::vector<double>& x, int& evals) {
  ++evals;
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

NelderMeadResult run_once(const Objective& f, const std::vector<double>& x0, const NelderMeadOptions& opts,
                          int budget) {
  const std::size_t n = x0.size();
  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double beta = n > 1 ? 1.0 + 2.0 / dn : 2.0;
  const double gamma = n > 1 ? 0.75 - 1.0 / (2.0 * dn) : 0.5;
  const double delta = n > 1 ? 1.0 - 1.0 / dn : 0.5;

  int evals = 0;
  Simplex sx;
  sx.pts.push_back(x0);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = x0;
    p[i] += opts.initial_step;
    sx.pts.push_back(std::move(p));
  }
  for (const auto& p : sx.pts) sx.vals.push_back(safe_eval(f, p, evals));

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  bool converged = false;

  while (evals < budget) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sx.vals[a] < sx.vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter, std::abs(sx.pts[i][j] - sx.pts[best][j]));
      }
    }
    if (sx.vals[worst] - sx.vals[best] <= opts.ftol && diameter <= opts.xtol) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += sx.pts[i][j];
    }
    for (double& c : centroid) c /= dn;

    const auto& xw = sx.pts[worst];
    for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + alpha * (centroid[j] - xw[j]);
    const double fr = safe_eval(f, xr, evals);

    if (fr < sx.vals[best]) {
      for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + beta * (xr[j] - centroid[j]);
      const double fe = safe_eval(f, xe, evals);
      if (fe < fr) {
        sx.pts[worst] = xe;
        sx.vals[worst] = fe;
      } else {
        sx.pts[worst] = xr;
        sx.vals[worst] = fr;
      }
      continue;
    }
    if (fr < sx.vals[second_worst]) {
      sx.pts[worst] = xr;
      sx.vals[worst] = fr;
      continue;
    }
    const bool outside = fr < sx.vals[worst];
    for (std::size_t j = 0; j < n; ++j) {
      xc[j] = outside ? centroid[j] + gamma * (xr[j] - centroid[j])
                      : centroid[j] - gamma * (centroid[j] - xw[j]);
    }
    const double fc = safe_eval(f, xc, evals);
    if (fc < (outside ? fr : sx.vals[worst])) {
      sx.pts[worst] = xc;
      sx.vals[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    const auto anchor = sx.pts[best];
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        sx.pts[i][j] = anchor[j] + delta * (sx.pts[i][j] - anchor[j]);
      }
      sx.vals[i] = safe_eval(f, sx.pts[i], evals);
    }
  }

  const auto it = std::min_element(sx.vals.begin(), sx.vals.end());
  const auto idx = static_cast<std::size_t>(it - sx.vals.begin());
  return {sx.pts[idx], *it, evals, converged};
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const Objective& f, std::vector<double> x0,
                                      const NelderMeadOptions& opts) {
  NelderMeadResult result = run_once(f, x0, opts, opts.max_evaluations);
  for (int round = 0; round < opts.polish_rounds; ++round) {
    NelderMeadResult next = run_once(f, result.x, opts, opts.max_evaluations);
    const int total = result.evaluations + next.evaluations;
    const bool improved = next.f < result.f - opts.ftol;
    if (next.f <= result.f) {
      result.x = std::move(next.x);
      result.f = next.f;
      result.converged = next.converged;
    }
    result.evaluations = total;
    if (!improved) break;
  }
  return result;
}

}  // namespace hardylab
