#include "circlekit/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circlekit/errors.hpp"

namespace circlekit {

Polynomial Polynomial::monomial(int num_vars, Exponents exponents, Integer coefficient) {
  Polynomial p(num_vars);
  p.add_term(exponents, coefficient);
  return p;
}

void Polynomial::add_term(const Exponents& exponents, const Integer& coefficient) {
  if (static_cast<int>(exponents.size()) != num_vars_) {
    throw DomainError("Polynomial::add_term: exponent vector has wrong length");
  }
  for (int e : exponents) {
    if (e < 0) throw DomainError("Polynomial::add_term: negative exponent");
  }
  if (coefficient == 0) return;
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    terms_.emplace(exponents, coefficient);
    return;
  }
  it->second += coefficient;
  if (it->second == 0) terms_.erase(it);
}

int Polynomial::total_degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int sum = 0;
    for (int v : e) sum += v;
    deg = std::max(deg, sum);
  }
  return deg;
}

bool Polynomial::is_homogeneous_of_degree(int degree) const {
  for (const auto& [e, c] : terms_) {
    int sum = 0;
    for (int v : e) sum += v;
    if (sum != degree) return false;
  }
  return true;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= num_vars_) throw DomainError("Polynomial::derivative: index out of range");
  Polynomial out(num_vars_);
  for (const auto& [e, c] : terms_) {
    const int k = e[static_cast<std::size_t>(var)];
    if (k == 0) continue;
    Exponents e2 = e;
    e2[static_cast<std::size_t>(var)] = k - 1;
    out.add_term(e2, c * k);
  }
  return out;
}

Integer Polynomial::evaluate(std::span<const Integer> x) const {
  if (static_cast<int>(x.size()) != num_vars_) {
    throw DomainError("Polynomial::evaluate: dimension mismatch");
  }
  Integer acc = 0;
  Integer term, power;
  for (const auto& [e, c] : terms_) {
    term = c;
    for (int i = 0; i < num_vars_; ++i) {
      const int k = e[static_cast<std::size_t>(i)];
      if (k == 0) continue;
      mpz_pow_ui(power.get_mpz_t(), x[static_cast<std::size_t>(i)].get_mpz_t(),
                 static_cast<unsigned long>(k));
      term *= power;
    }
    acc += term;
  }
  return acc;
}

Integer Polynomial::evaluate(std::span<const long long> x) const {
  if (static_cast<int>(x.size()) != num_vars_) {
    throw DomainError("Polynomial::evaluate: dimension mismatch");
  }
  std::vector<Integer> big;
  big.reserve(x.size());
  for (long long v : x) big.emplace_back(static_cast<long>(v));
  return evaluate(std::span<const Integer>(big));
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != num_vars_) {
    throw DomainError("Polynomial::evaluate: dimension mismatch");
  }
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c.get_d();
    for (int i = 0; i < num_vars_; ++i) {
      const int k = e[static_cast<std::size_t>(i)];
      if (k != 0) term *= std::pow(x[static_cast<std::size_t>(i)], k);
    }
    acc += term;
  }
  return acc;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw DomainError("Polynomial: variable count mismatch");
  Polynomial out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw DomainError("Polynomial: variable count mismatch");
  Polynomial out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw DomainError("Polynomial: variable count mismatch");
  Polynomial out(num_vars_);
  Exponents e(static_cast<std::size_t>(num_vars_));
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : other.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      out.add_term(e, c1 * c2);
    }
  }
  return out;
}

Polynomial Polynomial::scaled(const Integer& factor) const {
  Polynomial out(num_vars_);
  if (factor == 0) return out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * factor);
  return out;
}

std::vector<int> Polynomial::support() const {
  std::vector<bool> used(static_cast<std::size_t>(num_vars_), false);
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0) used[i] = true;
    }
  }
  std::vector<int> out;
  for (int i = 0; i < num_vars_; ++i) {
    if (used[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest lexicographic monomial first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Integer mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool constant = std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
    if (mag != 1 || constant) os << mag.get_str();
    bool need_star = (mag != 1);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << "*";
      os << "x" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
      need_star = true;
    }
  }
  return os.str();
}

RealPolynomial::RealPolynomial(int num_vars, std::vector<RealMonomial> monomials)
    : num_vars_(num_vars), monomials_(std::move(monomials)) {
  // Merge equal exponent vectors so evaluation work is minimal.
  std::map<std::vector<int>, double> merged;
  for (auto& m : monomials_) {
    if (static_cast<int>(m.exponents.size()) != num_vars_) {
      throw DomainError("RealPolynomial: exponent vector has wrong length");
    }
    merged[m.exponents] += m.coefficient;
  }
  monomials_.clear();
  for (auto& [e, c] : merged) {
    if (c != 0.0) monomials_.push_back({e, c});
  }
}

int RealPolynomial::total_degree() const {
  int deg = -1;
  for (const auto& m : monomials_) {
    int sum = 0;
    for (int v : m.exponents) sum += v;
    deg = std::max(deg, sum);
  }
  return deg;
}

double RealPolynomial::evaluate(std::span<const double> x) const {
  double acc = 0.0;
  for (const auto& m : monomials_) {
    double term = m.coefficient;
    for (int i = 0; i < num_vars_; ++i) {
      const int k = m.exponents[static_cast<std::size_t>(i)];
      const double xi = x[static_cast<std::size_t>(i)];
      for (int j = 0; j < k; ++j) term *= xi;
    }
    acc += term;
  }
  return acc;
}

void RealPolynomial::restrict_to_last(std::span<const double> prefix, std::vector<double>& out) const {
  int max_last = 0;
  for (const auto& m : monomials_) max_last = std::max(max_last, m.exponents.back());
  out.assign(static_cast<std::size_t>(max_last) + 1, 0.0);
  const int lead = num_vars_ - 1;
  for (const auto& m : monomials_) {
    double term = m.coefficient;
    for (int i = 0; i < lead; ++i) {
      const int k = m.exponents[static_cast<std::size_t>(i)];
      const double xi = prefix[static_cast<std::size_t>(i)];
      for (int j = 0; j < k; ++j) term *= xi;
    }
    out[static_cast<std::size_t>(m.exponents.back())] += term;
  }
}

std::pair<double, double> interval_pow(double lo, double hi, int e) {
  if (e == 0) return {1.0, 1.0};
  const double a = std::pow(lo, e);
  const double b = std::pow(hi, e);
  if (e % 2 == 1) return {a, b};
  if (lo >= 0.0) return {a, b};
  if (hi <= 0.0) return {b, a};
  return {0.0, std::max(a, b)};
}

namespace {

std::pair<double, double> monomial_range(double coefficient, const std::vector<int>& exponents,
                                         std::span<const double> lo, std::span<const double> hi) {
  double rlo = coefficient, rhi = coefficient;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) continue;
    const auto [plo, phi] = interval_pow(lo[i], hi[i], exponents[i]);
    const double c[4] = {rlo * plo, rlo * phi, rhi * plo, rhi * phi};
    rlo = *std::min_element(c, c + 4);
    rhi = *std::max_element(c, c + 4);
  }
  return {rlo, rhi};
}

}  // namespace

std::pair<double, double> RealPolynomial::range(std::span<const double> lo,
                                                std::span<const double> hi) const {
  double rlo = 0.0, rhi = 0.0;
  for (const auto& m : monomials_) {
    const auto [a, b] = monomial_range(m.coefficient, m.exponents, lo, hi);
    rlo += a;
    rhi += b;
  }
  return {rlo, rhi};
}

double RealPolynomial::derivative_bound(int var, std::span<const double> lo,
                                        std::span<const double> hi) const {
  double bound = 0.0;
  for (const auto& m : monomials_) {
    const int k = m.exponents[static_cast<std::size_t>(var)];
    if (k == 0) continue;
    std::vector<int> e = m.exponents;
    e[static_cast<std::size_t>(var)] = k - 1;
    const auto [a, b] = monomial_range(m.coefficient * k, e, lo, hi);
    bound += std::max(std::abs(a), std::abs(b));
  }
  return bound;
}

RealPolynomial pin_variables(const Polynomial& p, const std::vector<bool>& pinned,
                             std::span<const double> values) {
  const int s = p.num_vars();
  if (static_cast<int>(pinned.size()) != s || static_cast<int>(values.size()) != s) {
    throw DomainError("pin_variables: dimension mismatch");
  }
  std::vector<int> free_index(static_cast<std::size_t>(s), -1);
  int nfree = 0;
  for (int i = 0; i < s; ++i) {
    if (!pinned[static_cast<std::size_t>(i)]) free_index[static_cast<std::size_t>(i)] = nfree++;
  }
  std::vector<RealMonomial> monomials;
  for (const auto& [e, c] : p.terms()) {
    RealMonomial m{std::vector<int>(static_cast<std::size_t>(nfree), 0), c.get_d()};
    for (int i = 0; i < s; ++i) {
      const int k = e[static_cast<std::size_t>(i)];
      if (k == 0) continue;
      if (pinned[static_cast<std::size_t>(i)]) {
        m.coefficient *= std::pow(values[static_cast<std::size_t>(i)], k);
      } else {
        m.exponents[static_cast<std::size_t>(free_index[static_cast<std::size_t>(i)])] = k;
      }
    }
    monomials.push_back(std::move(m));
  }
  return RealPolynomial(nfree, std::move(monomials));
}

}  // namespace circlekit
