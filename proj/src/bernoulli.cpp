#include "circlekit/bernoulli.hpp"

#include <cmath>
#include <deque>
#include <memory>
#include <mutex>

#include "circlekit/errors.hpp"

namespace circlekit {

namespace {

std::mutex& table_mutex() {
  static std::mutex m;
  return m;
}

std::vector<Rational>& number_table() {
  static std::vector<Rational> table{Rational(1)};
  return table;
}

// deque keeps references stable while the table grows.
std::deque<BernoulliPolynomial>& poly_table() {
  static std::deque<BernoulliPolynomial> table;
  return table;
}

void extend_numbers_locked(int kappa) {
  auto& table = number_table();
  while (static_cast<int>(table.size()) <= kappa) {
    const unsigned k = static_cast<unsigned>(table.size());
    Rational acc(0);
    for (unsigned j = 0; j < k; ++j) {
      acc += Rational(binomial(k, j)) * table[j] / Rational(k - j + 1);
    }
    Rational b = -acc;
    b.canonicalize();
    table.push_back(b);
  }
}

}  // namespace

Integer binomial(unsigned n, unsigned k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Integer factorial(unsigned n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BernoulliPolynomial::BernoulliPolynomial(std::vector<Rational> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw DomainError("BernoulliPolynomial: empty coefficient list");
  coefficients_d_.reserve(coefficients_.size());
  for (const auto& c : coefficients_) coefficients_d_.push_back(c.get_d());
}

Rational BernoulliPolynomial::operator()(const Rational& x) const {
  Rational acc(0);
  for (std::size_t j = coefficients_.size(); j-- > 0;) {
    acc = acc * x + coefficients_[j];
  }
  acc.canonicalize();
  return acc;
}

double BernoulliPolynomial::operator()(double x) const {
  double acc = 0.0;
  for (std::size_t j = coefficients_d_.size(); j-- > 0;) {
    acc = acc * x + coefficients_d_[j];
  }
  return acc;
}

Rational bernoulli_number(int kappa) {
  if (kappa < 0) throw DomainError("bernoulli_number: negative index");
  std::lock_guard<std::mutex> lock(table_mutex());
  extend_numbers_locked(kappa);
  return number_table()[static_cast<std::size_t>(kappa)];
}

const BernoulliPolynomial& bernoulli_poly(int kappa) {
  if (kappa < 0) throw DomainError("bernoulli_poly: negative degree");
  std::lock_guard<std::mutex> lock(table_mutex());
  auto& polys = poly_table();
  if (static_cast<int>(polys.size()) <= kappa) {
    extend_numbers_locked(kappa);
    const auto& numbers = number_table();
    for (int k = static_cast<int>(polys.size()); k <= kappa; ++k) {
      std::vector<Rational> coeffs;
      coeffs.reserve(static_cast<std::size_t>(k) + 1);
      for (int j = 0; j <= k; ++j) {
        Rational c = Rational(binomial(static_cast<unsigned>(k), static_cast<unsigned>(j))) *
                     numbers[static_cast<std::size_t>(k - j)];
        c.canonicalize();
        coeffs.push_back(c);
      }
      polys.emplace_back(std::move(coeffs));
    }
  }
  return polys[static_cast<std::size_t>(kappa)];
}

Rational periodic_bernoulli(int kappa, const Rational& x) {
  return bernoulli_poly(kappa)(frac_of(x));
}

double periodic_bernoulli(int kappa, double x) {
  if (!std::isfinite(x)) throw DomainError("periodic_bernoulli: non-finite argument");
  return bernoulli_poly(kappa)(x - std::floor(x));
}

}  // namespace circlekit
