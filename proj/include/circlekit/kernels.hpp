#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace circlekit::kernels {

// Table of hot inner loops. Every entry has a scalar reference implementation; vector variants
// must agree with it (exactly for counting, to rounding level for the exponentials).
struct Ops {
  const char* name;
  // sum_k (w_re[k] + i w_im[k]) * e(theta[k]) with e(t) = exp(2 pi i t).
  std::complex<double> (*weighted_expi_sum)(const double* theta, const double* w_re, const double* w_im,
                                            std::size_t n);
  // re[k] + i im[k] = e(theta[k]).
  void (*expi)(const double* theta, double* re, double* im, std::size_t n);
  // Number of t in {x0, x0+1, ..., x0+len-1} with sum_k coeffs[k] t^k == target. All values are
  // integers and the caller guarantees every Horner partial stays below 2^53 in magnitude.
  std::int64_t (*count_poly_row)(const double* coeffs, int degree, double x0, std::int64_t len, double target);
};

const Ops& scalar_ops();
// nullptr when the build or the running CPU lacks AVX2 and FMA.
const Ops* avx2_ops();
// The variant used by the library. AVX2 when available unless CIRCLEKIT_ISA=scalar is set.
const Ops& active_ops();

}  // namespace circlekit::kernels
