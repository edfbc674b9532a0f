#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "circlekit/forms.hpp"
#include "circlekit/indexing.hpp"

namespace circlekit {

struct SeriesValue {
  std::complex<double> value;
  double imag_residual = 0.0;
  int Q = 0;
  double term_tail_estimate = 0.0;  // |block q = Q|
  bool converged = false;           // three trailing blocks below the tolerance
  std::vector<std::complex<double>> blocks;  // blocks[q-1] = sum over r of the q-th term

  bool operator==(const SeriesValue&) const = default;
};

struct SeriesOptions {
  double budget = 1e8;       // max residue vectors per (component, q)
  double tolerance = 1e-3;   // block size (relative to max(1,|value|)) declared negligible
  int threads = 0;           // 0: process default
};

// Generalised complete exponential sum S_(I1,I2,tau)(P; r, q). Requires gcd(r, q) = 1.
std::complex<double> exp_sum(const HomogeneousForm& F, const IndexTuple& t, const Box& box, const Rational& P,
                             std::int64_t r, std::int64_t q, const SeriesOptions& opts = {});
// Same sum without the coprimality requirement.
std::complex<double> exp_sum_raw(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                 const Rational& P, std::int64_t r, std::int64_t q,
                                 const SeriesOptions& opts = {});
// The direct s-fold residue sum with exact rational Bernoulli arguments and no factorisation.
// Intended as a test oracle for small q^s.
std::complex<double> exp_sum_direct(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                    const Rational& P, std::int64_t r, std::int64_t q);

// Per-variable weight ((-1)^(tau+1)/(tau+1)!) beta_(tau+1)((P b - z)/q) for upper faces and
// ((-1)^tau/(tau+1)!) beta_(tau+1)((P a - z)/q) for lower faces; 1 for free variables.
Rational face_weight(const IndexTuple& t, const Box& box, const Rational& P, int i, std::int64_t z,
                     std::int64_t q);

SeriesValue truncated_singular_series(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                      const Rational& P, const Integer& n, int Q,
                                      const SeriesOptions& opts = {});

// sum_{q | M} sum_{(r,q)=1} q^{-|I3|+|tau|} S(P; r, q) e(-r n / q).
std::complex<double> divisor_sum_series(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                        const Rational& P, const Integer& n, std::int64_t M,
                                        const SeriesOptions& opts = {});

// M^{-|I3|+|tau|+1} sum_{z mod M, F(z) = n mod M} prod_i weight_i(z_i).
double congruence_weighted_count(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                 const Rational& P, const Integer& n, std::int64_t M, double budget = 1e9);

// #{z mod M over the variables other than i0 : F(z) = n mod M with z_{i0} = z0}.
Integer r_count(const HomogeneousForm& F, int i0, std::int64_t z0, std::int64_t M, const Integer& n,
                double budget = 1e9);

// (S(P; m r, m q), m^{|I3|-|tau|} S(P; r, q)).
std::pair<std::complex<double>, std::complex<double>> lifted_exp_sum_check(const HomogeneousForm& F,
                                                                           const IndexTuple& t, const Box& box,
                                                                           const Rational& P, std::int64_t r,
                                                                           std::int64_t q, std::int64_t m);

std::complex<double> waring_S(std::int64_t q, std::int64_t a, int d);
std::complex<double> waring_T(std::int64_t q, std::int64_t a, int d);
SeriesValue waring_sigma_series(int s, int j, const Integer& n, int d, int Q, double tolerance = 1e-3);
double waring_C(int s, int j, const Integer& n, int d, int Q);

// mu(0..N) by a linear sieve.
std::vector<int> mobius_sieve(int N);

// (1/2) sum_{e <= E} mu(e) e^{-(s - weight - d)} Series(P/e, 0; Q).
double mobius_modified_series(const HomogeneousForm& F, const IndexTuple& t, const Box& box, const Rational& P,
                              int Q, int E, const SeriesOptions& opts = {});

std::int64_t gcd64(std::int64_t a, std::int64_t b);

}  // namespace circlekit
