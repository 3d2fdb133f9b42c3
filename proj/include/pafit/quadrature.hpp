#pragma once

#include <functional>

namespace pafit::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0; // summed |K15 - G7| over accepted panels
  int evaluations = 0;
  bool converged = true;
};

// Adaptive 7/15-point Gauss-Kronrod on a finite interval. Panels are bisected
// until their error estimate falls below their share of abs_tol, or until
// max_depth bisections have been made (converged = false in that case).
Result gaussKronrod(const std::function<double(double)> &f, double a, double b,
                    double abs_tol, int max_depth);

} // namespace pafit::quadrature
