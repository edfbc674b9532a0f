#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace circlekit {

// Controls for every numerical integration in the library.
struct QuadratureSpec {
  int base_order = 16;                     // Gauss-Legendre points per panel
  double panels_per_unit_frequency = 1.0;  // panels per oscillation of the phase
  int gamma_panels = 2;                    // outer panels per unit of phase frequency
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_refinements = 6;

  bool operator==(const QuadratureSpec&) const = default;
};

void validate(const QuadratureSpec& spec);

struct GaussLegendreRule {
  std::vector<double> nodes;  // on [-1, 1], ascending
  std::vector<double> weights;
};

// Nodes by Newton iteration on the Legendre recurrence; cached per order.
const GaussLegendreRule& gauss_legendre(int order);

using ComplexFn = std::function<std::complex<double>(double)>;

struct QuadResult {
  std::complex<double> value;
  double error_estimate;
  int panels;
};

// Composite rule with `panels` equal panels on each interval between consecutive breakpoints.
std::complex<double> integrate_panels(const ComplexFn& f, const std::vector<double>& breakpoints, int panels,
                                      const GaussLegendreRule& rule);

// Doubles the panel count per breakpoint interval until two successive results agree to
// max(abs_tol, rel_tol * |value|). Throws ConvergenceError after max_refinements doublings.
QuadResult integrate_adaptive(const ComplexFn& f, std::vector<double> breakpoints, const QuadratureSpec& spec,
                              int initial_panels = 2);

}  // namespace circlekit
