#pragma once

#include <complex>
#include <functional>
#include <span>

#include "circlekit/indexing.hpp"
#include "circlekit/quadrature.hpp"

namespace circlekit {

// G(x, j) returns the j-th derivative of G at x.
using SmoothFunction1D = std::function<std::complex<double>(double x, int j)>;

// g(x, kappa) returns the mixed partial derivative d^kappa g at x.
using SmoothFunctionND = std::function<std::complex<double>(std::span<const double> x, std::span<const int> kappa)>;

struct EMResult {
  std::complex<double> value;
  double error_estimate;  // accumulated quadrature error estimates
};

// Euler-MacLaurin evaluation of sum_{a < x <= b} G(x) with K boundary orders and the
// beta_K remainder integral. Panels break at every integer in (a, b).
EMResult em_sum_1d(const SmoothFunction1D& G, double a, double b, int K, const QuadratureSpec& quad);

// Multi-dimensional version summing over all partitions of the variables into upper-face,
// lower-face, integrated and remainder sets. Limited to s <= 3.
EMResult em_sum_multi(const SmoothFunctionND& g, const Box& box, int K, const QuadratureSpec& quad);

}  // namespace circlekit
