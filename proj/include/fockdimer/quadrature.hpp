#pragma once

#include <functional>

#include "fockdimer/moebius.hpp"

namespace fockdimer {

struct QuadratureResult {
  Complex value;
  double error = 0.0;  ///< sum of accepted |K15 - G7| estimates
  int evaluations = 0;
  int intervals = 0;
  int max_depth = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of a complex function over [a, b].
///
/// An interval is accepted when its |K15 - G7| is below abs_tol times its share of [a, b].
/// Throws ConvergenceError when an interval at depth max_depth is still rejected.
QuadratureResult integrate(const std::function<Complex(double)>& f, double a, double b, double abs_tol = 1e-9,
                           int max_depth = 30);

}  // namespace fockdimer
