#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "circlekit/rational.hpp"

namespace circlekit {

using Exponents = std::vector<int>;

// Sparse multivariate polynomial with exact integer coefficients. Monomials are kept in
// lexicographic order of their exponent vectors; zero coefficients are never stored.
class Polynomial {
 public:
  explicit Polynomial(int num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial monomial(int num_vars, Exponents exponents, Integer coefficient);

  int num_vars() const { return num_vars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Integer>& terms() const { return terms_; }

  // Adds coefficient * x^exponents (dropping the term if it cancels).
  void add_term(const Exponents& exponents, const Integer& coefficient);

  // -1 for the zero polynomial.
  int total_degree() const;
  // True when every monomial has total degree exactly `degree` (vacuously true for zero).
  bool is_homogeneous_of_degree(int degree) const;

  Polynomial derivative(int var) const;

  Integer evaluate(std::span<const Integer> x) const;
  Integer evaluate(std::span<const long long> x) const;
  double evaluate(std::span<const double> x) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(const Integer& factor) const;
  bool operator==(const Polynomial& other) const = default;

  // Variable indices that appear with a positive exponent.
  std::vector<int> support() const;

  std::string to_string() const;

 private:
  int num_vars_;
  std::map<Exponents, Integer> terms_;
};

// Polynomial in a subset of variables with floating coefficients, produced by pinning some
// coordinates of an exact polynomial to real values.
struct RealMonomial {
  std::vector<int> exponents;  // over the free variables, in order
  double coefficient;
};

class RealPolynomial {
 public:
  RealPolynomial() = default;
  RealPolynomial(int num_vars, std::vector<RealMonomial> monomials);

  int num_vars() const { return num_vars_; }
  const std::vector<RealMonomial>& monomials() const { return monomials_; }
  bool is_zero() const { return monomials_.empty(); }
  int total_degree() const;

  double evaluate(std::span<const double> x) const;

  // Coefficients of the univariate polynomial in the last free variable obtained by fixing the
  // others to `prefix` (size num_vars - 1). Output index k holds the coefficient of t^k.
  void restrict_to_last(std::span<const double> prefix, std::vector<double>& out) const;

  // Interval enclosure of the polynomial over the box [lo, hi].
  std::pair<double, double> range(std::span<const double> lo, std::span<const double> hi) const;
  // Bound on |d/dx_var| over the box [lo, hi].
  double derivative_bound(int var, std::span<const double> lo, std::span<const double> hi) const;

 private:
  int num_vars_ = 0;
  std::vector<RealMonomial> monomials_;
};

// Pins variables: `pinned[i]` true means x_i is fixed to `values[i]`; the remaining variables
// (in increasing index order) become the variables of the result.
RealPolynomial pin_variables(const Polynomial& p, const std::vector<bool>& pinned,
                             std::span<const double> values);

// Interval power [lo, hi]^e.
std::pair<double, double> interval_pow(double lo, double hi, int e);

}  // namespace circlekit
