#pragma once

#include <vector>

#include "circlekit/rational.hpp"

namespace circlekit {

// B_kappa(x) = sum_j C(kappa, j) B_{kappa-j} x^j, stored exactly.
class BernoulliPolynomial {
 public:
  explicit BernoulliPolynomial(std::vector<Rational> coefficients);

  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  // Coefficient of x^j.
  const Rational& coefficient(int j) const { return coefficients_.at(static_cast<std::size_t>(j)); }
  const std::vector<Rational>& coefficients() const { return coefficients_; }

  Rational operator()(const Rational& x) const;
  // Coefficients are rounded to double once and the polynomial is evaluated by Horner.
  double operator()(double x) const;

 private:
  std::vector<Rational> coefficients_;
  std::vector<double> coefficients_d_;
};

// Exact Bernoulli number via B_k = -sum_{j<k} C(k,j) B_j / (k-j+1); memoized, thread-safe.
Rational bernoulli_number(int kappa);

// Memoized, thread-safe; the returned reference stays valid for the program lifetime.
const BernoulliPolynomial& bernoulli_poly(int kappa);

// beta_kappa(x) = B_kappa({x}).
Rational periodic_bernoulli(int kappa, const Rational& x);
double periodic_bernoulli(int kappa, double x);

Integer binomial(unsigned n, unsigned k);
Integer factorial(unsigned n);

}  // namespace circlekit
