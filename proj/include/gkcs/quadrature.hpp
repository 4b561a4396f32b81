#pragma once

#include <vector>

namespace gkcs::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
Rule gauss_legendre(int n);

/// Composite Simpson weights for `points` equally spaced samples with spacing h.
/// Even sample counts close the last four samples with the 3/8 rule.
std::vector<double> simpson_weights(int points, double h);

}  // namespace gkcs::quadrature
