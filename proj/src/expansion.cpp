#include "circlekit/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "circlekit/errors.hpp"

namespace circlekit {

long long hypothesis_threshold(int d, int K) {
  long long pow2 = 1;
  for (int k = 1; k < d; ++k) pow2 *= 2;
  return static_cast<long long>(d - 1) * pow2 * (2LL * K * K + 2LL * K - 2);
}

namespace {

void hypothesis_warnings(const HomogeneousForm& F, const ExpansionOptions& opts, std::vector<std::string>& out) {
  const int sigma = opts.meta.singular_locus_dim;
  const long long need = hypothesis_threshold(F.d(), opts.K);
  if (sigma < 0) {
    out.push_back("singular locus dimension not supplied; convergence hypothesis s - dim V* > " +
                  std::to_string(need) + " not checked");
  } else if (F.s() - sigma <= need) {
    out.push_back("convergence hypothesis violated: s - dim V* = " + std::to_string(F.s() - sigma) +
                  " but the expansion theorem asks for more than " + std::to_string(need));
  }
  if (sigma >= 0) {
    out.push_back("singular loci of face restrictions bounded by dim V* + |I1| + |I2| = " + std::to_string(sigma) +
                  " + |I1| + |I2|");
  }
}

double real_pow(const Rational& P, int e) { return std::pow(P.get_d(), e); }

}  // namespace

ExpansionResult assemble_expansion(const HomogeneousForm& F, const Box& box, const Rational& P, const Integer& n,
                                   const ExpansionOptions& opts) {
  validate(box);
  if (box.s() != F.s()) throw DomainError("assemble_expansion: box dimension differs from s");
  if (opts.K < 1) throw DomainError("assemble_expansion: K must be at least 1");
  if (!(P > 0)) throw DomainError("assemble_expansion: P must be positive");

  ExpansionResult out;
  out.P = P;
  out.n = n;
  out.K = opts.K;
  out.Q_series = opts.Q_series;
  out.Q_integral = opts.Q_integral;
  hypothesis_warnings(F, opts, out.warnings);

  Rational scaled = Rational(n) / rational_pow(P, static_cast<unsigned>(F.d()));
  scaled.canonicalize();
  const double argument = scaled.get_d();

  for (const auto& t : enumerate_index_set(F.s(), opts.K)) {
    ExpansionTerm term;
    term.tuple = t;
    term.exponent = F.s() - t.weight() - F.d();
    try {
      term.series = truncated_singular_series(F, t, box, P, n, opts.Q_series, opts.series);
      term.integral = truncated_singular_integral(F, t, box, argument, opts.Q_integral, opts.quad, opts.integral);
      term.term_value = term.series.value.real() * term.integral.value.real() * real_pow(P, term.exponent);
      if (!term.series.converged) {
        out.warnings.push_back("series for " + to_string(t) + " has not settled below tolerance at Q=" +
                               std::to_string(opts.Q_series));
      }
      if (term.integral.convergence_unguaranteed) {
        out.warnings.push_back("integral for " + to_string(t) + " has F(sigma(x)) of degree below d; convergence unguaranteed");
      }
    } catch (const ConvergenceError& e) {
      if (!opts.skip_on_failure) throw;
      term.failed = true;
      term.failure = e.what();
    } catch (const BudgetExceeded& e) {
      if (!opts.skip_on_failure) throw;
      term.failed = true;
      term.failure = e.what();
    }
    out.terms.push_back(std::move(term));
  }
  for (const auto& term : out.terms) {
    if (!term.failed) out.total += term.term_value;
  }
  if (opts.attach_exact) {
    out.exact_count = brute_force_count(F, box, P, n, opts.count);
    out.residual = out.exact_count->get_d() - out.total;
  }
  return out;
}

std::pair<std::complex<double>, std::complex<double>> major_arc_model(const HomogeneousForm& F, const Box& box,
                                                                      const Rational& P, const Integer& n,
                                                                      std::int64_t r, std::int64_t q, double gamma,
                                                                      int K, const QuadratureSpec& quad) {
  if (std::gcd(r, q) != 1) throw DomainError("major_arc_model: r and q must be coprime");
  const std::complex<double> exact = lattice_exponential_sum(F, box, P, n, r, q, gamma);
  const double Pd = std::pow(P.get_d(), F.d());
  const double two_pi = 2.0 * 3.14159265358979323846;
  const std::int64_t nq = mod_small(n, q);
  const double rn = static_cast<double>((r % q) * nq % q) / static_cast<double>(q);
  const std::complex<double> rational_phase = std::polar(1.0, -two_pi * rn);
  const double gn = gamma * n.get_d();
  const std::complex<double> gamma_phase = std::polar(1.0, -two_pi * (gn - std::nearbyint(gn)));
  std::complex<double> model = 0.0;
  for (const auto& t : enumerate_index_set(F.s(), K)) {
    const int free_count = static_cast<int>(t.I3().size());
    const int e = free_count - t.tau_norm();
    const std::complex<double> S = exp_sum(F, t, box, P, r, q);
    const std::complex<double> J = J_gamma(F, t, box, Pd * gamma, quad);
    model += std::pow(static_cast<double>(q), -e) * S * rational_phase * std::pow(P.get_d(), e) * J * gamma_phase;
  }
  return {exact, model};
}

RationalPointCount rational_point_count_exact(const HomogeneousForm& F, const Rational& P, const CountOptions& opts) {
  RationalPointCount out{0, 0};
  if (P < 1) return out;
  out.direct = primitive_zero_count(F, P, opts);
  const Integer E = floor_of(P);
  const auto mu = mobius_sieve(static_cast<int>(E.get_si()));
  Integer twice = 0;
  for (int e = 1; e <= E.get_si(); ++e) {
    if (mu[static_cast<std::size_t>(e)] == 0) continue;
    const Integer R = closed_box_zero_count(F, P / Rational(e), opts);
    twice += mu[static_cast<std::size_t>(e)] * (R - 1);
  }
  if (twice % 2 != 0) throw std::logic_error("rational_point_count_exact: odd Moebius sum");
  out.mobius = twice / 2;
  return out;
}

ExpansionResult rational_point_expansion(const HomogeneousForm& F, const Rational& P, const ExpansionOptions& opts) {
  if (opts.K < 1) throw DomainError("rational_point_expansion: K must be at least 1");
  const Box box = symmetric_box(F.s());
  ExpansionResult out;
  out.P = P;
  out.n = 0;
  out.K = opts.K;
  out.Q_series = opts.Q_series;
  out.Q_integral = opts.Q_integral;
  hypothesis_warnings(F, opts, out.warnings);
  if (P < 1) {
    out.warnings.push_back("P < 1: no rational points of height at most P");
    if (opts.attach_exact) {
      out.exact_count = Integer(0);
      out.residual = 0.0;
    }
    return out;
  }
  const int E = static_cast<int>(floor_of(P).get_si());
  for (const auto& t : enumerate_index_set(F.s(), opts.K)) {
    ExpansionTerm term;
    term.tuple = t;
    term.exponent = F.s() - t.weight() - F.d();
    try {
      term.series.value = mobius_modified_series(F, t, box, P, opts.Q_series, E, opts.series);
      term.series.Q = opts.Q_series;
      term.series.converged = true;
      term.integral = truncated_singular_integral(F, t, box, 0.0, opts.Q_integral, opts.quad, opts.integral);
      term.term_value = term.series.value.real() * term.integral.value.real() * real_pow(P, term.exponent);
    } catch (const ConvergenceError& e) {
      if (!opts.skip_on_failure) throw;
      term.failed = true;
      term.failure = e.what();
    } catch (const BudgetExceeded& e) {
      if (!opts.skip_on_failure) throw;
      term.failed = true;
      term.failure = e.what();
    }
    out.terms.push_back(std::move(term));
  }
  for (const auto& term : out.terms) {
    if (!term.failed) out.total += term.term_value;
  }
  if (opts.attach_exact) {
    out.exact_count = primitive_zero_count(F, P, opts.count);
    out.residual = out.exact_count->get_d() - out.total;
  }
  return out;
}

std::vector<ReportRow> comparison_report(const HomogeneousForm& F, const Box& box,
                                         const std::function<Integer(const Rational&)>& n_of_P,
                                         const std::vector<Rational>& P_grid, const std::vector<int>& K_list,
                                         const ExpansionOptions& opts) {
  std::vector<ReportRow> rows;
  if (P_grid.empty() || K_list.empty()) return rows;
  const int K_max = *std::max_element(K_list.begin(), K_list.end());
  for (const auto& P : P_grid) {
    const Integer n = n_of_P(P);
    ExpansionOptions o = opts;
    o.K = K_max;
    o.attach_exact = true;
    const ExpansionResult full = assemble_expansion(F, box, P, n, o);
    for (int K : K_list) {
      ReportRow row;
      row.P = P;
      row.K = K;
      row.n = n;
      row.exact = *full.exact_count;
      for (const auto& term : full.terms) {
        if (!term.failed && term.tuple.weight() < K) row.total += term.term_value;
      }
      row.residual = row.exact.get_d() - row.total;
      row.normalized_residual = row.residual / std::pow(P.get_d(), F.s() - F.d() - K + 1);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace circlekit
