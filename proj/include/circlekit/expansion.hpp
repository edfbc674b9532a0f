#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circlekit/forms.hpp"
#include "circlekit/indexing.hpp"
#include "circlekit/lattice.hpp"
#include "circlekit/quadrature.hpp"
#include "circlekit/singular_integrals.hpp"
#include "circlekit/singular_series.hpp"

namespace circlekit {

struct ExpansionTerm {
  IndexTuple tuple;
  SeriesValue series;
  IntegralValue integral;
  int exponent = 0;
  double term_value = 0.0;
  bool failed = false;
  std::string failure;

  bool operator==(const ExpansionTerm&) const = default;
};

struct ExpansionResult {
  std::vector<ExpansionTerm> terms;
  double total = 0.0;
  Rational P;
  Integer n;
  int K = 1;
  int Q_series = 1;
  double Q_integral = 1.0;
  std::optional<Integer> exact_count;
  std::optional<double> residual;
  std::vector<std::string> warnings;

  bool operator==(const ExpansionResult&) const = default;
};

struct ExpansionOptions {
  int K = 1;
  int Q_series = 20;
  double Q_integral = 100.0;
  QuadratureSpec quad;
  FormMetadata meta;
  bool skip_on_failure = false;
  bool attach_exact = false;
  SeriesOptions series;
  IntegralOptions integral;
  CountOptions count;
};

// Smallest s - dim V* allowed by the convergence hypothesis for degree d and K terms.
long long hypothesis_threshold(int d, int K);

ExpansionResult assemble_expansion(const HomogeneousForm& F, const Box& box, const Rational& P, const Integer& n,
                                   const ExpansionOptions& opts);

// (exact sum of e(alpha F(x)) e(-alpha n) over P * box, the major-arc model with K terms).
std::pair<std::complex<double>, std::complex<double>> major_arc_model(const HomogeneousForm& F, const Box& box,
                                                                      const Rational& P, const Integer& n,
                                                                      std::int64_t r, std::int64_t q, double gamma,
                                                                      int K, const QuadratureSpec& quad);

struct RationalPointCount {
  Integer direct;  // primitive zeros up to sign with height <= P
  Integer mobius;  // (1/2) sum_e mu(e) (R(P/e, 0) - 1) on the closed box [-1, 1]^s
};

RationalPointCount rational_point_count_exact(const HomogeneousForm& F, const Rational& P,
                                              const CountOptions& opts = {});

// Expansion of N_X(P) with the Moebius-modified series and J(0) on the box (-1, 1]^s.
ExpansionResult rational_point_expansion(const HomogeneousForm& F, const Rational& P, const ExpansionOptions& opts);

struct ReportRow {
  Rational P;
  int K = 1;
  Integer n;
  Integer exact;
  double total = 0.0;
  double residual = 0.0;
  double normalized_residual = 0.0;  // residual / P^{s-d-K+1}

  bool operator==(const ReportRow&) const = default;
};

std::vector<ReportRow> comparison_report(const HomogeneousForm& F, const Box& box,
                                         const std::function<Integer(const Rational&)>& n_of_P,
                                         const std::vector<Rational>& P_grid, const std::vector<int>& K_list,
                                         const ExpansionOptions& opts);

}  // namespace circlekit
