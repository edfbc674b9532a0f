#include "circlekit/lattice.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "circlekit/errors.hpp"
#include "circlekit/kernels.hpp"
#include "circlekit/parallel.hpp"

namespace circlekit {

namespace {

constexpr double kExact = 9007199254740992.0;  // 2^53

double point_count(const std::vector<Integer>& lo, const std::vector<Integer>& hi) {
  double total = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const Integer len = hi[i] - lo[i] + 1;
    if (len <= 0) return 0.0;
    total *= len.get_d();
  }
  return total;
}

// F as a polynomial in the last variable: rows[k] holds the monomials multiplying x_s^k,
// with the last exponent removed.
struct RowForm {
  std::vector<std::vector<std::pair<double, std::vector<int>>>> rows;
  int degree = 0;
};

RowForm split_rows(const HomogeneousForm& F) {
  const int s = F.s();
  RowForm out;
  for (const auto& [e, c] : F.polynomial().terms()) out.degree = std::max(out.degree, e.back());
  out.rows.resize(static_cast<std::size_t>(out.degree) + 1);
  for (const auto& [e, c] : F.polynomial().terms()) {
    std::vector<int> head(e.begin(), e.begin() + (s - 1));
    out.rows[static_cast<std::size_t>(e.back())].emplace_back(c.get_d(), std::move(head));
  }
  return out;
}

bool positive_diagonal(const HomogeneousForm& F) {
  for (const auto& [e, c] : F.polynomial().terms()) {
    if (c <= 0) return false;
    int nonzero = 0;
    for (int v : e) nonzero += v > 0;
    if (nonzero != 1) return false;
  }
  return F.d() % 2 == 0;
}

}  // namespace

Integer count_in_integer_box(const HomogeneousForm& F, const std::vector<Integer>& lo, const std::vector<Integer>& hi,
                             const Integer& n, const CountOptions& opts) {
  const int s = F.s();
  if (static_cast<int>(lo.size()) != s || static_cast<int>(hi.size()) != s) {
    throw DomainError("count_in_integer_box: bounds have wrong dimension");
  }
  const double points = point_count(lo, hi);
  if (points == 0.0) return 0;
  if (points > opts.budget) {
    throw BudgetExceeded("lattice enumeration of " + std::to_string(points) + " points exceeds the budget");
  }

  // Sum of |c| * prod M_i^e_i bounds every Horner partial, so below 2^53 all arithmetic is exact
  // in doubles.
  std::vector<double> M(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    M[static_cast<std::size_t>(i)] = std::max(std::abs(lo[static_cast<std::size_t>(i)].get_d()),
                                              std::abs(hi[static_cast<std::size_t>(i)].get_d()));
  }
  double bound = std::abs(n.get_d());
  for (const auto& [e, c] : F.polynomial().terms()) {
    double term = std::abs(c.get_d());
    for (int i = 0; i < s; ++i) term *= std::pow(std::max(1.0, M[static_cast<std::size_t>(i)]), e[static_cast<std::size_t>(i)]);
    bound += term;
  }
  const bool fast = bound < kExact / 2;
  const int threads = opts.threads > 0 ? opts.threads : default_threads();

  if (!fast) {
    // Exact arbitrary-precision path, chunked over the first coordinate.
    const Integer span0 = hi[0] - lo[0] + 1;
    const std::size_t chunks = static_cast<std::size_t>(span0.get_ui());
    std::vector<Integer> partial(chunks, 0);
    parallel_for(chunks, threads, [&](std::size_t c) {
      std::vector<Integer> x(lo);
      x[0] = lo[0] + static_cast<unsigned long>(c);
      Integer count = 0;
      for (;;) {
        if (evaluate_integer(F, x) == n) ++count;
        int k = 1;
        while (k < s && ++x[static_cast<std::size_t>(k)] > hi[static_cast<std::size_t>(k)]) {
          x[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)];
          ++k;
        }
        if (k >= s) break;
      }
      partial[c] = count;
    });
    Integer total = 0;
    for (const auto& p : partial) total += p;
    return total;
  }

  const RowForm rf = split_rows(F);
  const bool reject = opts.early_rejection && positive_diagonal(F);
  const double target = n.get_d();
  const double row_lo = lo.back().get_d();
  const long long row_len = static_cast<long long>(Integer(hi.back() - lo.back() + 1).get_d());
  const auto& ops = kernels::active_ops();

  const int head = s - 1;
  std::vector<double> hlo(static_cast<std::size_t>(head)), hhi(static_cast<std::size_t>(head));
  for (int i = 0; i < head; ++i) {
    hlo[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)].get_d();
    hhi[static_cast<std::size_t>(i)] = hi[static_cast<std::size_t>(i)].get_d();
  }
  const std::size_t chunks = head == 0 ? 1 : static_cast<std::size_t>(hhi[0] - hlo[0] + 1);
  std::vector<long long> partial(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<double> x(hlo);
    if (head > 0) x[0] = hlo[0] + static_cast<double>(c);
    std::vector<double> coeffs(rf.rows.size());
    long long count = 0;
    for (;;) {
      for (std::size_t k = 0; k < rf.rows.size(); ++k) {
        double v = 0.0;
        for (const auto& [coef, e] : rf.rows[k]) {
          double term = coef;
          for (int i = 0; i < head; ++i) {
            for (int p = 0; p < e[static_cast<std::size_t>(i)]; ++p) term *= x[static_cast<std::size_t>(i)];
          }
          v += term;
        }
        coeffs[k] = v;
      }
      if (!(reject && coeffs[0] > target)) {
        count += ops.count_poly_row(coeffs.data(), rf.degree, row_lo, row_len, target);
      }
      int k = 1;
      while (k < head && ++x[static_cast<std::size_t>(k)] > hhi[static_cast<std::size_t>(k)]) {
        x[static_cast<std::size_t>(k)] = hlo[static_cast<std::size_t>(k)];
        ++k;
      }
      if (k >= head) break;
    }
    partial[c] = count;
  });
  Integer total = 0;
  for (long long p : partial) total += static_cast<long>(p);
  return total;
}

Integer brute_force_count(const HomogeneousForm& F, const Box& box, const Rational& P, const Integer& n,
                          const CountOptions& opts) {
  validate(box);
  if (box.s() != F.s()) throw DomainError("brute_force_count: box dimension differs from s");
  if (!(P > 0)) throw DomainError("brute_force_count: P must be positive");
  std::vector<Integer> lo, hi;
  for (int i = 0; i < F.s(); ++i) {
    lo.push_back(floor_of(P * box.a[static_cast<std::size_t>(i)]) + 1);
    hi.push_back(floor_of(P * box.b[static_cast<std::size_t>(i)]));
  }
  return count_in_integer_box(F, lo, hi, n, opts);
}

Integer closed_box_zero_count(const HomogeneousForm& F, const Rational& R, const CountOptions& opts) {
  if (R < 0) return 0;
  const Integer m = floor_of(R);
  std::vector<Integer> lo(static_cast<std::size_t>(F.s()), -m), hi(static_cast<std::size_t>(F.s()), m);
  return count_in_integer_box(F, lo, hi, 0, opts);
}

Integer primitive_zero_count(const HomogeneousForm& F, const Rational& P, const CountOptions& opts) {
  if (P < 1) return 0;
  const Integer m = floor_of(P);
  const int s = F.s();
  if (!fits_int64(m)) throw BudgetExceeded("primitive_zero_count: height bound too large");
  const long long mm = m.get_si();
  const double points = std::pow(2.0 * static_cast<double>(mm) + 1.0, s);
  if (points > opts.budget) throw BudgetExceeded("primitive_zero_count: enumeration exceeds the budget");
  const int threads = opts.threads > 0 ? opts.threads : default_threads();
  const std::size_t chunks = static_cast<std::size_t>(2 * mm + 1);
  std::vector<long long> partial(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<long long> x(static_cast<std::size_t>(s), -mm);
    x[0] = -mm + static_cast<long long>(c);
    long long count = 0;
    for (;;) {
      long long g = 0;
      for (long long v : x) g = std::gcd(g, v);
      if (g == 1 && evaluate_integer(F, x) == 0) ++count;
      int k = 1;
      while (k < s && ++x[static_cast<std::size_t>(k)] > mm) {
        x[static_cast<std::size_t>(k)] = -mm;
        ++k;
      }
      if (k >= s) break;
    }
    partial[c] = count;
  });
  long long total = 0;
  for (long long p : partial) total += p;
  return Integer(static_cast<long>(total / 2));
}

std::complex<double> lattice_exponential_sum(const HomogeneousForm& F, const Box& box, const Rational& P,
                                             const Integer& n, std::int64_t r, std::int64_t q, double gamma,
                                             double budget) {
  validate(box);
  const int s = F.s();
  std::vector<Integer> lo, hi;
  for (int i = 0; i < s; ++i) {
    lo.push_back(floor_of(P * box.a[static_cast<std::size_t>(i)]) + 1);
    hi.push_back(floor_of(P * box.b[static_cast<std::size_t>(i)]));
  }
  const double points = point_count(lo, hi);
  if (points > budget) throw BudgetExceeded("lattice_exponential_sum: enumeration exceeds the budget");
  if (points == 0.0) return 0.0;
  std::vector<Integer> x(lo);
  std::complex<double> total = 0.0;
  const std::int64_t nq = mod_small(n * r, q);
  for (;;) {
    const Integer value = evaluate_integer(F, x);
    const std::int64_t rational_phase = (mod_small(value * r, q) - nq + q) % q;
    const double theta = static_cast<double>(rational_phase) / static_cast<double>(q) +
                         gamma * Integer(value - n).get_d();
    const double red = theta - std::nearbyint(theta);
    total += std::complex<double>(std::cos(2.0 * std::numbers::pi * red), std::sin(2.0 * std::numbers::pi * red));
    int k = 0;
    while (k < s && ++x[static_cast<std::size_t>(k)] > hi[static_cast<std::size_t>(k)]) {
      x[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)];
      ++k;
    }
    if (k == s) break;
  }
  return total;
}

}  // namespace circlekit
