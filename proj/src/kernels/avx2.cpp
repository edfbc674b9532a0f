#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "circlekit/kernels.hpp"

namespace circlekit::kernels {

namespace {

// e(theta) for four lanes. theta is reduced to r in [-1/2, 1/2], then split as r = k/4 + f/4
// with integer k and |f| <= 1/2, so the polynomial arguments stay within [-pi/4, pi/4].
inline void expi4(__m256d theta, __m256d& c_out, __m256d& s_out) {
  const __m256d r = _mm256_sub_pd(theta, _mm256_round_pd(theta, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
  const __m256d x = _mm256_mul_pd(r, _mm256_set1_pd(4.0));
  const __m256d k = _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d f = _mm256_mul_pd(_mm256_sub_pd(x, k), _mm256_set1_pd(std::numbers::pi / 2.0));
  const __m256d f2 = _mm256_mul_pd(f, f);

  // Taylor coefficients of sin up to x^15 and cos up to x^16.
  __m256d sp = _mm256_set1_pd(-1.0 / 1307674368000.0);
  sp = _mm256_fmadd_pd(sp, f2, _mm256_set1_pd(1.0 / 6227020800.0));
  sp = _mm256_fmadd_pd(sp, f2, _mm256_set1_pd(-1.0 / 39916800.0));
  sp = _mm256_fmadd_pd(sp, f2, _mm256_set1_pd(1.0 / 362880.0));
  sp = _mm256_fmadd_pd(sp, f2, _mm256_set1_pd(-1.0 / 5040.0));
  sp = _mm256_fmadd_pd(sp, f2, _mm256_set1_pd(1.0 / 120.0));
  sp = _mm256_fmadd_pd(sp, f2, _mm256_set1_pd(-1.0 / 6.0));
  sp = _mm256_mul_pd(sp, f2);
  const __m256d sn = _mm256_fmadd_pd(sp, f, f);

  __m256d cp = _mm256_set1_pd(1.0 / 20922789888000.0);
  cp = _mm256_fmadd_pd(cp, f2, _mm256_set1_pd(-1.0 / 87178291200.0));
  cp = _mm256_fmadd_pd(cp, f2, _mm256_set1_pd(1.0 / 479001600.0));
  cp = _mm256_fmadd_pd(cp, f2, _mm256_set1_pd(-1.0 / 3628800.0));
  cp = _mm256_fmadd_pd(cp, f2, _mm256_set1_pd(1.0 / 40320.0));
  cp = _mm256_fmadd_pd(cp, f2, _mm256_set1_pd(-1.0 / 720.0));
  cp = _mm256_fmadd_pd(cp, f2, _mm256_set1_pd(1.0 / 24.0));
  cp = _mm256_fmadd_pd(cp, f2, _mm256_set1_pd(-0.5));
  const __m256d cs = _mm256_fmadd_pd(cp, f2, _mm256_set1_pd(1.0));

  // Multiply by i^k for k in {-2,...,2}.
  const __m128i ki = _mm256_cvtpd_epi32(k);
  const __m256i q = _mm256_cvtepi32_epi64(_mm_and_si128(ki, _mm_set1_epi32(3)));
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, _mm256_set1_epi64x(1)),
                                                              _mm256_set1_epi64x(1)));
  const __m256d neg_c = _mm256_castsi256_pd(_mm256_or_si256(_mm256_cmpeq_epi64(q, _mm256_set1_epi64x(1)),
                                                            _mm256_cmpeq_epi64(q, _mm256_set1_epi64x(2))));
  const __m256d neg_s = _mm256_castsi256_pd(_mm256_or_si256(_mm256_cmpeq_epi64(q, _mm256_set1_epi64x(2)),
                                                            _mm256_cmpeq_epi64(q, _mm256_set1_epi64x(3))));
  // k=0: (c, s); k=1: (-s, c); k=2: (-c, -s); k=3: (s, -c).
  __m256d c = _mm256_blendv_pd(cs, sn, swap);
  __m256d s = _mm256_blendv_pd(sn, cs, swap);
  const __m256d sign = _mm256_set1_pd(-0.0);
  c = _mm256_xor_pd(c, _mm256_and_pd(neg_c, sign));
  s = _mm256_xor_pd(s, _mm256_and_pd(neg_s, sign));
  c_out = c;
  s_out = s;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline void expi_tail(double theta, double& re, double& im) {
  alignas(32) double t[4] = {theta, 0.0, 0.0, 0.0};
  alignas(32) double c[4], s[4];
  __m256d cv, sv;
  expi4(_mm256_load_pd(t), cv, sv);
  _mm256_store_pd(c, cv);
  _mm256_store_pd(s, sv);
  re = c[0];
  im = s[0];
}

std::complex<double> weighted_expi_sum_avx2(const double* theta, const double* w_re, const double* w_im,
                                            std::size_t n) {
  __m256d acc_re = _mm256_setzero_pd(), acc_im = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d c, s;
    expi4(_mm256_loadu_pd(theta + k), c, s);
    const __m256d wr = _mm256_loadu_pd(w_re + k);
    const __m256d wi = _mm256_loadu_pd(w_im + k);
    acc_re = _mm256_add_pd(acc_re, _mm256_fmsub_pd(wr, c, _mm256_mul_pd(wi, s)));
    acc_im = _mm256_add_pd(acc_im, _mm256_fmadd_pd(wr, s, _mm256_mul_pd(wi, c)));
  }
  double re = hsum(acc_re), im = hsum(acc_im);
  for (; k < n; ++k) {
    double c, s;
    expi_tail(theta[k], c, s);
    re += w_re[k] * c - w_im[k] * s;
    im += w_re[k] * s + w_im[k] * c;
  }
  return {re, im};
}

void expi_avx2(const double* theta, double* re, double* im, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d c, s;
    expi4(_mm256_loadu_pd(theta + k), c, s);
    _mm256_storeu_pd(re + k, c);
    _mm256_storeu_pd(im + k, s);
  }
  for (; k < n; ++k) expi_tail(theta[k], re[k], im[k]);
}

std::int64_t count_poly_row_avx2(const double* coeffs, int degree, double x0, std::int64_t len,
                                 double target) {
  const __m256d tgt = _mm256_set1_pd(target);
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d t = _mm256_add_pd(_mm256_set1_pd(x0), _mm256_setr_pd(0.0, 1.0, 2.0, 3.0));
  __m256i hits = _mm256_setzero_si256();
  std::int64_t j = 0;
  for (; j + 4 <= len; j += 4) {
    __m256d v = _mm256_set1_pd(coeffs[degree]);
    for (int k = degree - 1; k >= 0; --k) v = _mm256_fmadd_pd(v, t, _mm256_set1_pd(coeffs[k]));
    // Equal lanes are all-ones, i.e. -1 as 64-bit integers.
    hits = _mm256_sub_epi64(hits, _mm256_castpd_si256(_mm256_cmp_pd(v, tgt, _CMP_EQ_OQ)));
    t = _mm256_add_pd(t, step);
  }
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), hits);
  std::int64_t count = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; j < len; ++j) {
    const double tv = x0 + static_cast<double>(j);
    double v = coeffs[degree];
    for (int k = degree - 1; k >= 0; --k) v = v * tv + coeffs[k];
    count += (v == target);
  }
  return count;
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{"avx2", weighted_expi_sum_avx2, expi_avx2, count_poly_row_avx2};
  return &ops;
}

}  // namespace circlekit::kernels
