#include <cmath>
#include <numbers>

#include "circlekit/kernels.hpp"

namespace circlekit::kernels {

namespace {

inline void expi_one(double theta, double& re, double& im) {
  const double r = theta - std::nearbyint(theta);
  const double angle = 2.0 * std::numbers::pi * r;
  re = std::cos(angle);
  im = std::sin(angle);
}

std::complex<double> weighted_expi_sum_scalar(const double* theta, const double* w_re, const double* w_im,
                                              std::size_t n) {
  double acc_re = 0.0, acc_im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double c, s;
    expi_one(theta[k], c, s);
    acc_re += w_re[k] * c - w_im[k] * s;
    acc_im += w_re[k] * s + w_im[k] * c;
  }
  return {acc_re, acc_im};
}

void expi_scalar(const double* theta, double* re, double* im, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) expi_one(theta[k], re[k], im[k]);
}

std::int64_t count_poly_row_scalar(const double* coeffs, int degree, double x0, std::int64_t len,
                                   double target) {
  std::int64_t count = 0;
  for (std::int64_t j = 0; j < len; ++j) {
    const double t = x0 + static_cast<double>(j);
    double v = coeffs[degree];
    for (int k = degree - 1; k >= 0; --k) v = v * t + coeffs[k];
    count += (v == target);
  }
  return count;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", weighted_expi_sum_scalar, expi_scalar, count_poly_row_scalar};
  return ops;
}

}  // namespace circlekit::kernels
