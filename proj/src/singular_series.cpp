#include "circlekit/singular_series.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "circlekit/bernoulli.hpp"
#include "circlekit/errors.hpp"
#include "circlekit/parallel.hpp"

namespace circlekit {

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

namespace {

using u128 = unsigned __int128;

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<u128>(a) * static_cast<u128>(b)) % static_cast<u128>(m));
}

std::int64_t powmod(std::int64_t base, int e, std::int64_t m) {
  std::int64_t result = 1 % m, b = base % m;
  while (e > 0) {
    if (e & 1) result = mulmod(result, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return result;
}

std::vector<std::complex<double>> unit_roots(std::int64_t q) {
  std::vector<std::complex<double>> table(static_cast<std::size_t>(q));
  for (std::int64_t j = 0; j < q; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(q);
    table[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
  }
  return table;
}

double int_pow(double base, int e) {
  double r = 1.0;
  const bool neg = e < 0;
  for (int k = 0; k < std::abs(e); ++k) r *= base;
  return neg ? 1.0 / r : r;
}

// F restricted to one group of interacting variables, with coefficients kept exact.
struct ComponentPoly {
  std::vector<int> vars;
  std::vector<std::pair<Integer, std::vector<int>>> monomials;  // exponents over `vars`
};

std::vector<ComponentPoly> split_components(const HomogeneousForm& F) {
  std::vector<ComponentPoly> out;
  for (const auto& group : F.components()) {
    ComponentPoly c;
    c.vars = group;
    for (const auto& [e, coef] : F.polynomial().terms()) {
      bool touches = false;
      for (int v : group) touches = touches || e[static_cast<std::size_t>(v)] > 0;
      if (!touches) continue;
      std::vector<int> local;
      for (int v : group) local.push_back(e[static_cast<std::size_t>(v)]);
      c.monomials.emplace_back(coef, std::move(local));
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Evaluates a component polynomial modulo q over all residue vectors in odometer order and
// hands (residue of F, index vector) to `visit`.
template <class Visit>
void for_each_residue(const ComponentPoly& c, int d, std::int64_t q, Visit&& visit) {
  const std::size_t k = c.vars.size();
  // pw[j][z * (d + 1) + e] = z^e mod q
  std::vector<std::vector<std::int64_t>> pw(k, std::vector<std::int64_t>(static_cast<std::size_t>(q * (d + 1))));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::int64_t z = 0; z < q; ++z) {
      std::int64_t v = 1 % q;
      for (int e = 0; e <= d; ++e) {
        pw[j][static_cast<std::size_t>(z * (d + 1) + e)] = v;
        v = mulmod(v, z, q);
      }
    }
  }
  std::vector<std::int64_t> coeff;
  for (const auto& [coef, e] : c.monomials) coeff.push_back(mod_small(coef, q));
  std::vector<std::int64_t> z(k, 0);
  for (;;) {
    std::int64_t value = 0;
    for (std::size_t m = 0; m < c.monomials.size(); ++m) {
      std::int64_t term = coeff[m];
      const auto& e = c.monomials[m].second;
      for (std::size_t j = 0; j < k && term != 0; ++j) {
        if (e[j] != 0) term = mulmod(term, pw[j][static_cast<std::size_t>(z[j] * (d + 1) + e[j])], q);
      }
      value += term;
      if (value >= q) value -= q;
    }
    visit(value, z);
    std::size_t j = 0;
    while (j < k && ++z[j] == q) z[j++] = 0;
    if (j == k) break;
  }
}

class ExpSumEngine {
 public:
  ExpSumEngine(const HomogeneousForm& F, const IndexTuple& t, const Box& box, const Rational& P,
               const SeriesOptions& opts)
      : F_(F), t_(t), box_(box), P_(P), opts_(opts), components_(split_components(F)) {
    validate(t, F.s());
    validate(box);
    if (box.s() != F.s()) throw DomainError("box dimension differs from the number of variables");
    if (!(P > 0)) throw DomainError("P must be positive");
  }

  // S(P; r, q) for each r in `rs` (taken modulo q).
  std::vector<std::complex<double>> evaluate(std::int64_t q, const std::vector<std::int64_t>& rs) const {
    if (q < 1) throw DomainError("q must be positive");
    const auto roots = unit_roots(q);
    std::vector<std::complex<double>> result(rs.size(), 1.0);
    for (const auto& c : components_) {
      const double size = std::pow(static_cast<double>(q), static_cast<double>(c.vars.size()));
      if (size > opts_.budget) {
        throw BudgetExceeded("exponential sum: q^" + std::to_string(c.vars.size()) + " residues exceed the budget");
      }
      std::vector<std::vector<double>> w;
      for (int v : c.vars) {
        std::vector<double> wv(static_cast<std::size_t>(q));
        for (std::int64_t z = 0; z < q; ++z) wv[static_cast<std::size_t>(z)] = face_weight(t_, box_, P_, v, z, q).get_d();
        w.push_back(std::move(wv));
      }
      std::vector<double> hist(static_cast<std::size_t>(q), 0.0);
      for_each_residue(c, F_.d(), q, [&](std::int64_t value, const std::vector<std::int64_t>& z) {
        double weight = 1.0;
        for (std::size_t j = 0; j < z.size(); ++j) weight *= w[j][static_cast<std::size_t>(z[j])];
        hist[static_cast<std::size_t>(value)] += weight;
      });
      for (std::size_t k = 0; k < rs.size(); ++k) {
        const std::int64_t r = ((rs[k] % q) + q) % q;
        std::complex<double> acc = 0.0;
        for (std::int64_t v = 0; v < q; ++v) {
          const double h = hist[static_cast<std::size_t>(v)];
          if (h != 0.0) acc += h * roots[static_cast<std::size_t>(mulmod(r, v, q))];
        }
        result[k] *= acc;
      }
    }
    return result;
  }

  int free_count() const { return static_cast<int>(t_.I3().size()); }
  int tau_norm() const { return t_.tau_norm(); }

 private:
  const HomogeneousForm& F_;
  const IndexTuple& t_;
  const Box& box_;
  Rational P_;
  SeriesOptions opts_;
  std::vector<ComponentPoly> components_;
};

std::vector<std::int64_t> coprime_residues(std::int64_t q) {
  std::vector<std::int64_t> rs;
  for (std::int64_t r = 1; r <= q; ++r) {
    if (std::gcd(r, q) == 1) rs.push_back(r);
  }
  return rs;
}

std::complex<double> series_block(const ExpSumEngine& engine, std::int64_t q, const Integer& n) {
  const auto rs = coprime_residues(q);
  const auto sums = engine.evaluate(q, rs);
  const auto roots = unit_roots(q);
  const std::int64_t nq = mod_small(n, q);
  const double scale = int_pow(static_cast<double>(q), -engine.free_count() + engine.tau_norm());
  std::complex<double> block = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const std::int64_t phase = (q - mulmod(rs[k] % q, nq, q)) % q;
    block += sums[k] * roots[static_cast<std::size_t>(phase)];
  }
  return scale * block;
}

void finish_series(SeriesValue& out, double tolerance) {
  out.value = 0.0;
  for (const auto& b : out.blocks) out.value += b;
  out.imag_residual = std::abs(out.value.imag());
  out.term_tail_estimate = out.blocks.empty() ? 0.0 : std::abs(out.blocks.back());
  const double scale = std::max(1.0, std::abs(out.value));
  out.converged = out.blocks.size() >= 3;
  for (std::size_t k = 0; k < 3 && k < out.blocks.size(); ++k) {
    out.converged = out.converged && std::abs(out.blocks[out.blocks.size() - 1 - k]) <= tolerance * scale;
  }
}

}  // namespace

Rational face_weight(const IndexTuple& t, const Box& box, const Rational& P, int i, std::int64_t z,
                     std::int64_t q) {
  const auto roles = t.roles();
  const int role = roles[static_cast<std::size_t>(i)];
  if (role == 0) return Rational(1);
  const int tau = t.tau[static_cast<std::size_t>(i)];
  const Rational& edge = role == 1 ? box.b[static_cast<std::size_t>(i)] : box.a[static_cast<std::size_t>(i)];
  Rational arg = (P * edge - Rational(static_cast<long>(z))) / Rational(static_cast<long>(q));
  arg.canonicalize();
  Rational coeff(1);
  coeff /= Rational(factorial(static_cast<unsigned>(tau + 1)));
  const int sign_exp = role == 1 ? tau + 1 : tau;
  if (sign_exp % 2 != 0) coeff = -coeff;
  return coeff * periodic_bernoulli(tau + 1, arg);
}

std::complex<double> exp_sum_raw(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                 const Rational& P, std::int64_t r, std::int64_t q, const SeriesOptions& opts) {
  ExpSumEngine engine(F, t, box, P, opts);
  return engine.evaluate(q, {r}).front();
}

std::complex<double> exp_sum(const HomogeneousForm& F, const IndexTuple& t, const Box& box, const Rational& P,
                             std::int64_t r, std::int64_t q, const SeriesOptions& opts) {
  if (q < 1) throw DomainError("exp_sum: q must be positive");
  if (std::gcd(r, q) != 1) throw DomainError("exp_sum: r and q must be coprime");
  return exp_sum_raw(F, t, box, P, r, q, opts);
}

std::complex<double> exp_sum_direct(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                    const Rational& P, std::int64_t r, std::int64_t q) {
  validate(t, F.s());
  const int s = F.s();
  std::vector<Integer> z(static_cast<std::size_t>(s), 0);
  std::complex<double> total = 0.0;
  for (;;) {
    Integer value = evaluate_integer(F, z) * r;
    const std::int64_t phase = mod_small(value, q);
    Rational weight(1);
    for (int i = 0; i < s; ++i) weight *= face_weight(t, box, P, i, z[static_cast<std::size_t>(i)].get_si(), q);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(q);
    total += weight.get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
    int k = 0;
    while (k < s && ++z[static_cast<std::size_t>(k)] == q) z[static_cast<std::size_t>(k++)] = 0;
    if (k == s) break;
  }
  return total;
}

SeriesValue truncated_singular_series(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                      const Rational& P, const Integer& n, int Q, const SeriesOptions& opts) {
  if (Q < 1) throw DomainError("truncated_singular_series: Q must be at least 1");
  ExpSumEngine engine(F, t, box, P, opts);
  SeriesValue out;
  out.Q = Q;
  out.blocks.assign(static_cast<std::size_t>(Q), 0.0);
  const int threads = opts.threads > 0 ? opts.threads : default_threads();
  parallel_for(static_cast<std::size_t>(Q), threads, [&](std::size_t k) {
    out.blocks[k] = series_block(engine, static_cast<std::int64_t>(k) + 1, n);
  });
  finish_series(out, opts.tolerance);
  return out;
}

std::complex<double> divisor_sum_series(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                        const Rational& P, const Integer& n, std::int64_t M,
                                        const SeriesOptions& opts) {
  if (M < 1) throw DomainError("divisor_sum_series: M must be positive");
  ExpSumEngine engine(F, t, box, P, opts);
  std::complex<double> total = 0.0;
  for (std::int64_t q = 1; q <= M; ++q) {
    if (M % q == 0) total += series_block(engine, q, n);
  }
  return total;
}

double congruence_weighted_count(const HomogeneousForm& F, const IndexTuple& t, const Box& box,
                                 const Rational& P, const Integer& n, std::int64_t M, double budget) {
  if (M < 1) throw DomainError("congruence_weighted_count: M must be positive");
  validate(t, F.s());
  const int s = F.s();
  if (std::pow(static_cast<double>(M), s) > budget) {
    throw BudgetExceeded("congruence_weighted_count: M^s exceeds the enumeration budget");
  }
  std::vector<std::vector<double>> w(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    for (std::int64_t z = 0; z < M; ++z) w[static_cast<std::size_t>(i)].push_back(face_weight(t, box, P, i, z, M).get_d());
  }
  ComponentPoly whole;
  for (int i = 0; i < s; ++i) whole.vars.push_back(i);
  for (const auto& [e, coef] : F.polynomial().terms()) whole.monomials.emplace_back(coef, e);
  const std::int64_t target = mod_small(n, M);
  double total = 0.0;
  for_each_residue(whole, F.d(), M, [&](std::int64_t value, const std::vector<std::int64_t>& z) {
    if (value != target) return;
    double weight = 1.0;
    for (int i = 0; i < s; ++i) weight *= w[static_cast<std::size_t>(i)][static_cast<std::size_t>(z[static_cast<std::size_t>(i)])];
    total += weight;
  });
  const int free_count = static_cast<int>(t.I3().size());
  return int_pow(static_cast<double>(M), -free_count + t.tau_norm() + 1) * total;
}

Integer r_count(const HomogeneousForm& F, int i0, std::int64_t z0, std::int64_t M, const Integer& n, double budget) {
  if (i0 < 0 || i0 >= F.s()) throw DomainError("r_count: variable index out of range");
  if (M < 1) throw DomainError("r_count: M must be positive");
  const int s = F.s();
  if (std::pow(static_cast<double>(M), s) > budget) {
    throw BudgetExceeded("r_count: M^s exceeds the enumeration budget");
  }
  ComponentPoly whole;
  for (int i = 0; i < s; ++i) whole.vars.push_back(i);
  for (const auto& [e, coef] : F.polynomial().terms()) whole.monomials.emplace_back(coef, e);
  const std::int64_t target = mod_small(n, M);
  const std::int64_t pinned = ((z0 % M) + M) % M;
  Integer count = 0;
  for_each_residue(whole, F.d(), M, [&](std::int64_t value, const std::vector<std::int64_t>& z) {
    if (z[static_cast<std::size_t>(i0)] == pinned && value == target) ++count;
  });
  return count;
}

std::pair<std::complex<double>, std::complex<double>> lifted_exp_sum_check(const HomogeneousForm& F,
                                                                           const IndexTuple& t, const Box& box,
                                                                           const Rational& P, std::int64_t r,
                                                                           std::int64_t q, std::int64_t m) {
  if (m < 1) throw DomainError("lifted_exp_sum_check: m must be positive");
  if (std::gcd(r, q) != 1) throw DomainError("lifted_exp_sum_check: r and q must be coprime");
  const std::complex<double> lifted = exp_sum_raw(F, t, box, P, m * r, m * q);
  const int free_count = static_cast<int>(t.I3().size());
  const std::complex<double> base = exp_sum(F, t, box, P, r, q);
  return {lifted, int_pow(static_cast<double>(m), free_count - t.tau_norm()) * base};
}

std::complex<double> waring_S(std::int64_t q, std::int64_t a, int d) {
  if (q < 1) throw DomainError("waring_S: q must be positive");
  const auto roots = unit_roots(q);
  const std::int64_t am = ((a % q) + q) % q;
  std::complex<double> total = 0.0;
  for (std::int64_t r = 1; r <= q; ++r) total += roots[static_cast<std::size_t>(mulmod(am, powmod(r, d, q), q))];
  return total;
}

std::complex<double> waring_T(std::int64_t q, std::int64_t a, int d) {
  if (q < 1) throw DomainError("waring_T: q must be positive");
  const auto roots = unit_roots(q);
  const std::int64_t am = ((a % q) + q) % q;
  std::complex<double> total = 0.0;
  for (std::int64_t r = 1; r <= q; ++r) {
    const double w = static_cast<double>(q - 2 * r) / static_cast<double>(2 * q);
    total += w * roots[static_cast<std::size_t>(mulmod(am, powmod(r, d, q), q))];
  }
  return total;
}

SeriesValue waring_sigma_series(int s, int j, const Integer& n, int d, int Q, double tolerance) {
  if (j < 0 || j > s) throw DomainError("waring_sigma_series: need 0 <= j <= s");
  if (Q < 1) throw DomainError("waring_sigma_series: Q must be at least 1");
  SeriesValue out;
  out.Q = Q;
  for (std::int64_t q = 1; q <= Q; ++q) {
    const auto roots = unit_roots(q);
    const std::int64_t nq = mod_small(n, q);
    std::complex<double> block = 0.0;
    for (std::int64_t a : coprime_residues(q)) {
      const std::complex<double> S = waring_S(q, a, d) / static_cast<double>(q);
      const std::complex<double> T = waring_T(q, a, d);
      std::complex<double> term = 1.0;
      for (int k = 0; k < s - j; ++k) term *= S;
      for (int k = 0; k < j; ++k) term *= T;
      block += term * roots[static_cast<std::size_t>((q - mulmod(a % q, nq, q)) % q)];
    }
    out.blocks.push_back(block);
  }
  finish_series(out, tolerance);
  return out;
}

double waring_C(int s, int j, const Integer& n, int d, int Q) {
  if (j < 0 || j >= s) throw DomainError("waring_C: need 0 <= j < s");
  if (d < 2) throw DomainError("waring_C: d must be at least 2");
  const double gamma_ratio = std::pow(std::tgamma(1.0 + 1.0 / d), s - j) / std::tgamma(static_cast<double>(s - j) / d);
  return binomial(static_cast<unsigned>(s), static_cast<unsigned>(j)).get_d() * gamma_ratio *
         waring_sigma_series(s, j, n, d, Q).value.real();
}

std::vector<int> mobius_sieve(int N) {
  std::vector<int> mu(static_cast<std::size_t>(std::max(N, 1)) + 1, 1), primes;
  std::vector<bool> composite(mu.size(), false);
  mu[0] = 0;
  for (int i = 2; i <= N; ++i) {
    if (!composite[static_cast<std::size_t>(i)]) {
      primes.push_back(i);
      mu[static_cast<std::size_t>(i)] = -1;
    }
    for (int p : primes) {
      const long long ip = static_cast<long long>(i) * p;
      if (ip > N) break;
      composite[static_cast<std::size_t>(ip)] = true;
      if (i % p == 0) {
        mu[static_cast<std::size_t>(ip)] = 0;
        break;
      }
      mu[static_cast<std::size_t>(ip)] = -mu[static_cast<std::size_t>(i)];
    }
  }
  mu.resize(static_cast<std::size_t>(N) + 1);
  return mu;
}

double mobius_modified_series(const HomogeneousForm& F, const IndexTuple& t, const Box& box, const Rational& P,
                              int Q, int E, const SeriesOptions& opts) {
  if (E < 1) throw DomainError("mobius_modified_series: E must be at least 1");
  const auto mu = mobius_sieve(E);
  const int exponent = F.s() - t.weight() - F.d();
  double total = 0.0;
  for (int e = 1; e <= E; ++e) {
    if (mu[static_cast<std::size_t>(e)] == 0) continue;
    const Rational Pe = P / Rational(e);
    const SeriesValue v = truncated_singular_series(F, t, box, Pe, Integer(0), Q, opts);
    total += mu[static_cast<std::size_t>(e)] * int_pow(static_cast<double>(e), -exponent) * v.value.real();
  }
  return 0.5 * total;
}

}  // namespace circlekit
