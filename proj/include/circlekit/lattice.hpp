#pragma once

#include <complex>
#include <vector>

#include "circlekit/forms.hpp"
#include "circlekit/indexing.hpp"

namespace circlekit {

struct CountOptions {
  double budget = 1e10;          // max lattice points visited
  int threads = 0;               // 0: process default
  bool early_rejection = false;  // skip rows once a positive diagonal form exceeds n
};

// Number of integer x with lo_i <= x_i <= hi_i and F(x) = n.
Integer count_in_integer_box(const HomogeneousForm& F, const std::vector<Integer>& lo, const std::vector<Integer>& hi,
                             const Integer& n, const CountOptions& opts = {});

// Lattice points of the dilated half-open box P * prod (a_i, b_i] on F(x) = n.
Integer brute_force_count(const HomogeneousForm& F, const Box& box, const Rational& P, const Integer& n,
                          const CountOptions& opts = {});

// Lattice points of the closed box [-R, R]^s on F(x) = 0, origin included.
Integer closed_box_zero_count(const HomogeneousForm& F, const Rational& R, const CountOptions& opts = {});

// Primitive integer zeros of F with max |x_i| <= P, counted up to sign.
Integer primitive_zero_count(const HomogeneousForm& F, const Rational& P, const CountOptions& opts = {});

// sum over x in P * box of e(alpha F(x)) e(-alpha n) with alpha = r/q + gamma.
std::complex<double> lattice_exponential_sum(const HomogeneousForm& F, const Box& box, const Rational& P,
                                             const Integer& n, std::int64_t r, std::int64_t q, double gamma,
                                             double budget = 1e8);

}  // namespace circlekit
