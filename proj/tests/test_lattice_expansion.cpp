#include <doctest.h>

#include <cmath>
#include <map>

#include "circlekit/errors.hpp"
#include "circlekit/expansion.hpp"
#include "circlekit/lattice.hpp"

using namespace circlekit;

namespace {

HomogeneousForm make(int s, std::vector<std::pair<Exponents, long>> terms) {
  std::vector<FormMonomial> m;
  for (auto& [e, c] : terms) m.push_back({e, Integer(c)});
  return HomogeneousForm::from_monomials(s, m);
}

const HomogeneousForm kCircle = make(2, {{{2, 0}, 1}, {{0, 2}, 1}});

ExpansionOptions quick(int K) {
  ExpansionOptions opts;
  opts.K = K;
  opts.Q_series = 10;
  opts.Q_integral = 40.0;
  return opts;
}

}  // namespace

TEST_CASE("circle count on the dilated unit box") {
  CHECK(brute_force_count(kCircle, unit_box(2), Rational(5), Integer(25)) == 2);
  CHECK(brute_force_count(kCircle, unit_box(2), Rational(5), Integer(-1)) == 0);
  CHECK(brute_force_count(kCircle, symmetric_box(2), Rational(5), Integer(25)) == 12 - 2);
}

TEST_CASE("half-open boundary on an integer dilation") {
  const auto [F, meta] = diagonal_form(2, 3);
  for (int P : {3, 4, 7}) {
    const Box shifted{std::vector<Rational>(3, Rational(-1, 2 * P)), std::vector<Rational>(3, Rational(1))};
    for (long n : {3L, 14L, 27L}) {
      CHECK(brute_force_count(F, unit_box(3), Rational(P), Integer(n)) ==
            brute_force_count(F, shifted, Rational(P), Integer(n)));
    }
  }
}

TEST_CASE("six squares regression fixture") {
  const auto [F, meta] = diagonal_form(2, 6);
  CHECK(brute_force_count(F, unit_box(6), Rational(12), Integer(100)) == 1710);
  CountOptions fast;
  fast.early_rejection = true;
  CHECK(brute_force_count(F, unit_box(6), Rational(12), Integer(100), fast) == 1710);
}

TEST_CASE("count budget is enforced") {
  CountOptions opts;
  opts.budget = 10;
  CHECK_THROWS_AS(brute_force_count(kCircle, unit_box(2), Rational(5), Integer(25), opts), BudgetExceeded);
}

TEST_CASE("hypothesis threshold") {
  CHECK(hypothesis_threshold(2, 1) == 4);
  CHECK(hypothesis_threshold(3, 2) == 80);
}

TEST_CASE("K = 1 gives the single main term") {
  const auto [F, meta] = diagonal_form(2, 4);
  const Rational P(6);
  const Integer n(36);
  const auto r = assemble_expansion(F, unit_box(4), P, n, quick(1));
  REQUIRE(r.terms.size() == 1);
  const auto& t = r.terms.front();
  CHECK(t.tuple == make_tuple(4, {}, {}));
  CHECK(t.exponent == 2);
  CHECK(t.term_value == doctest::Approx(t.series.value.real() * t.integral.value.real() * 36.0));
  CHECK(r.total == t.term_value);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("diagonal expansion keeps only the lower-face terms") {
  const auto [F, meta] = diagonal_form(2, 6);
  auto opts = quick(2);
  opts.attach_exact = true;
  const Rational P(8);
  const auto r = assemble_expansion(F, unit_box(6), P, Integer(64), opts);
  REQUIRE(r.terms.size() == enumerate_index_set(6, 2).size());
  CHECK(r.terms.front().tuple == make_tuple(6, {}, {}));
  std::vector<double> lower;
  for (const auto& t : r.terms) {
    const double scale = std::pow(8.0, t.exponent);
    if (!t.tuple.I1.empty() || t.tuple.weight() != static_cast<int>(t.tuple.I2.size())) {
      CHECK(std::abs(t.term_value) <= 1e-3 * scale);
    } else if (t.tuple.I2.size() == 1) {
      lower.push_back(t.term_value);
    }
  }
  REQUIRE(lower.size() == 6);
  for (double v : lower) CHECK(v == doctest::Approx(lower.front()).epsilon(1e-9));
  for (const auto& t : r.terms) CHECK(std::abs(r.terms.front().term_value) >= std::abs(t.term_value));
  REQUIRE(r.exact_count.has_value());
  CHECK(*r.residual == doctest::Approx(mpz_get_d(r.exact_count->get_mpz_t()) - r.total));
}

TEST_CASE("zero-dilation major-arc model") {
  const Rational P(10);
  const auto [exact, model] = major_arc_model(kCircle, unit_box(2), P, Integer(0), 1, 1, 0.0, 1, QuadratureSpec{});
  CHECK(exact.real() == doctest::Approx(100.0));
  CHECK(std::abs(model.real() - 100.0) <= 2.0 * 100.0 / 10.0);
  CHECK(std::abs(model.imag()) < 1e-9);
}

TEST_CASE("Moebius identity on an isotropic ternary form") {
  const auto F = make(3, {{{2, 0, 0}, 1}, {{0, 2, 0}, 1}, {{0, 0, 2}, -2}});
  for (int P : {1, 2, 3, 5, 9}) {
    const auto c = rational_point_count_exact(F, Rational(P));
    CHECK(c.direct == c.mobius);
  }
  CHECK(rational_point_count_exact(F, Rational(5)).direct > 0);
  const auto tiny = rational_point_count_exact(F, Rational(1, 2));
  CHECK(tiny.direct == 0);
  CHECK(tiny.mobius == 0);
}

TEST_CASE("anisotropic form has no rational points") {
  const auto [F, meta] = diagonal_form(2, 3);
  for (int P : {1, 4, 7}) {
    const auto c = rational_point_count_exact(F, Rational(P));
    CHECK(c.direct == 0);
    CHECK(c.mobius == 0);
  }
}

TEST_CASE("comparison report") {
  const auto [F, meta] = diagonal_form(2, 4);
  auto n_of_P = [](const Rational& P) {
    const Rational sq = P * P;
    return Integer(sq.get_num() / sq.get_den());
  };
  CHECK(comparison_report(F, unit_box(4), n_of_P, {}, {1, 2}, quick(2)).empty());

  const auto rows = comparison_report(F, unit_box(4), n_of_P, {Rational(5)}, {2}, quick(2));
  REQUIRE(rows.size() == 1);
  auto opts = quick(2);
  opts.attach_exact = true;
  const auto r = assemble_expansion(F, unit_box(4), Rational(5), Integer(25), opts);
  CHECK(rows[0].exact == *r.exact_count);
  CHECK(rows[0].total == doctest::Approx(r.total).epsilon(1e-12));
  CHECK(rows[0].normalized_residual == doctest::Approx(rows[0].residual / std::pow(5.0, 4 - 2 - 2 + 1)));
}
