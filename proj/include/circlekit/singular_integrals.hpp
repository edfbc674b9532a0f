#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "circlekit/forms.hpp"
#include "circlekit/indexing.hpp"
#include "circlekit/quadrature.hpp"

namespace circlekit {

struct IntegralValue {
  std::complex<double> value;
  double imag_residual = 0.0;
  double Q = 0.0;
  double tail_estimate = 0.0;   // |contribution of the bands with Q/2 <= |gamma| <= Q|
  double error_estimate = 0.0;  // accumulated quadrature error estimate
  bool convergence_unguaranteed = false;

  bool operator==(const IntegralValue&) const = default;
};

struct IntegralOptions {
  // Evaluate only gamma >= 0 and use J(-gamma) = conj(J(gamma)). When false both half-lines are
  // integrated and imag_residual measures the departure from realness.
  bool use_conjugate_symmetry = true;
  int threads = 0;             // 0: process default
  double node_budget = 5e7;    // max tensor nodes per evaluation of one factor of J
  bool use_cache = true;
};

// Evaluates J_(I1,I2,tau)(gamma). The integrand is split into factors over the groups of
// interacting variables; identical factors are evaluated once.
class JEvaluator {
 public:
  JEvaluator(const HomogeneousForm& F, const IndexTuple& t, const Box& box, const QuadratureSpec& quad,
             double node_budget = 5e7);

  struct Eval {
    std::complex<double> value;
    double error;
  };
  Eval operator()(double gamma) const;

  // Interval enclosure of F(sigma(x)) over the free box.
  std::pair<double, double> phase_range() const { return range_; }
  // F(sigma(x)) has no monomial of full degree in the free variables.
  bool convergence_unguaranteed() const { return unguaranteed_; }
  // Canonical description of the integrand; equal signatures give equal J.
  const std::string& signature() const { return signature_; }

 private:
  struct Factor {
    RealPolynomial phase;              // F_C(sigma(x)) over the free variables of the group
    std::vector<RealPolynomial> amp;   // amp[a-1] = g_a(sigma(x)); empty when tau vanishes on C
    std::vector<double> lo, hi;        // free box of the group
    std::vector<double> grad_bound;    // sup |d phase / dx_j| on the box
    int multiplicity = 1;
    std::string key;
  };
  Eval evaluate_factor(const Factor& f, double gamma) const;
  std::complex<double> factor_rule(const Factor& f, double gamma, const std::vector<int>& panels, int order) const;

  std::vector<Factor> factors_;
  QuadratureSpec quad_;
  double node_budget_;
  std::pair<double, double> range_;
  bool unguaranteed_ = false;
  std::string signature_;
  std::uint64_t id_ = 0;
};

std::complex<double> J_gamma(const HomogeneousForm& F, const IndexTuple& t, const Box& box, double gamma,
                             const QuadratureSpec& quad);

IntegralValue truncated_singular_integral(const HomogeneousForm& F, const IndexTuple& t, const Box& box, double n,
                                          double Q, const QuadratureSpec& quad, const IntegralOptions& opts = {});

void clear_integral_cache();
struct CacheStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
};
CacheStats integral_cache_stats();

// Mollifier omega(y) = c0 exp(-1/(1-y^2)) on (-1, 1) with unit mass.
double mollifier_c0();
double mollifier(double y);

struct MollifiedValue {
  double value;
  double error_estimate;
};

// Integral over the free box of T omega(T (F(x) - n)) with the variables of I1 and I2 pinned to
// the supplied values (in increasing index order).
MollifiedValue mollified_integral(const HomogeneousForm& F, const std::vector<int>& I1, const std::vector<int>& I2,
                                  const Box& box, double n, const std::vector<double>& x_I1,
                                  const std::vector<double>& x_I2, double T, const QuadratureSpec& quad);

double waring_gamma_closed_form(int d, int s_eff);

// (J(t) on (0,1]^s_eff, t^{s_eff/d-1} J(1) on (0, t^{-1/d}]^s_eff) for F = sum x_i^d, with the
// second truncation scaled to Q t so both sides describe the same object.
std::pair<double, double> scaled_integral_check(int d, int s_eff, double t_scale, const QuadratureSpec& quad,
                                                double Q = 200.0, const IntegralOptions& opts = {});

}  // namespace circlekit
