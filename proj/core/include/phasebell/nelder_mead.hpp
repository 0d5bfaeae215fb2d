#pragma once

#include <functional>
#include <vector>

namespace phasebell::opt {

struct SimplexOptions {
  int max_evaluations = 6000;
  double f_tolerance = 1e-11;  // stop once the simplex values spread less than this
  double x_tolerance = 1e-9;
  double initial_step = 0.25;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f with the adaptive Nelder-Mead simplex (coefficients scaled
/// with the dimension, which behaves much better above a handful of
/// variables than the textbook 1, 2, 1/2, 1/2).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const SimplexOptions& opts = {});

}  // namespace phasebell::opt
