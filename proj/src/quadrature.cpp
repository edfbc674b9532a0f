#include "circlekit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>

#include "circlekit/errors.hpp"

namespace circlekit {

void validate(const QuadratureSpec& spec) {
  if (spec.base_order < 1) throw DomainError("quadrature.base_order must be positive");
  if (!(spec.panels_per_unit_frequency > 0)) {
    throw DomainError("quadrature.panels_per_unit_frequency must be positive");
  }
  if (spec.gamma_panels < 1) throw DomainError("quadrature.gamma_panels must be positive");
  if (!(spec.abs_tol > 0 && spec.abs_tol <= 1e-2)) throw DomainError("quadrature.abs_tol must lie in (0, 1e-2]");
  if (!(spec.rel_tol > 0 && spec.rel_tol <= 1e-2)) throw DomainError("quadrature.rel_tol must lie in (0, 1e-2]");
  if (spec.max_refinements < 1) throw DomainError("quadrature.max_refinements must be positive");
}

namespace {

GaussLegendreRule build_rule(int n) {
  if (n == 1) return GaussLegendreRule{{0.0}, {2.0}};
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

std::complex<double> integrate_panels(const ComplexFn& f, const std::vector<double>& breakpoints, int panels,
                                      const GaussLegendreRule& rule) {
  std::complex<double> total = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double lo = breakpoints[k], hi = breakpoints[k + 1];
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + width * p;
      const double half = 0.5 * width, mid = a + half;
      std::complex<double> acc = 0.0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) acc += rule.weights[j] * f(mid + half * rule.nodes[j]);
      total += half * acc;
    }
  }
  return total;
}

QuadResult integrate_adaptive(const ComplexFn& f, std::vector<double> breakpoints, const QuadratureSpec& spec,
                              int initial_panels) {
  if (breakpoints.size() < 2) throw DomainError("integrate_adaptive: need at least two breakpoints");
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  const auto& rule = gauss_legendre(spec.base_order);
  int panels = std::max(1, initial_panels);
  std::complex<double> coarse = integrate_panels(f, breakpoints, panels, rule);
  double err = 0.0;
  for (int level = 0; level < spec.max_refinements; ++level) {
    panels *= 2;
    const std::complex<double> fine = integrate_panels(f, breakpoints, panels, rule);
    err = std::abs(fine - coarse);
    if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(fine))) return {fine, err, panels};
    coarse = fine;
  }
  throw ConvergenceError("integrate_adaptive: panel refinement budget exhausted", coarse.real(), err);
}

}  // namespace circlekit
