#pragma once

// Adaptive Nelder-Mead downhill simplex (dimension-dependent coefficients of
// Gao & Han, 2012), with optional re-initialization around the incumbent.

#include <functional>
#include <span>
#include <vector>

namespace hardylab {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  int max_evaluations = 50000;
  double ftol = 1e-13;       // spread of simplex values
  double xtol = 1e-9;        // simplex diameter, infinity norm
  double initial_step = 0.5;
  int polish_rounds = 8;     // restarts of the simplex around the best point
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f from x0. Non-finite objective values are treated as +inf.
NelderMeadResult nelder_mead_minimize(const Objective& f, std::vector<double> x0,
                                      const NelderMeadOptions& opts);

}  // namespace hardylab
