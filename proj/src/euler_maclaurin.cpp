#include "circlekit/euler_maclaurin.hpp"

#include <cmath>
#include <vector>

#include "circlekit/bernoulli.hpp"
#include "circlekit/errors.hpp"

namespace circlekit {

namespace {

std::vector<double> integer_breaks(double a, double b) {
  std::vector<double> out{a};
  for (double k = std::floor(a) + 1.0; k < b; k += 1.0) out.push_back(k);
  out.push_back(b);
  return out;
}

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

double inv_factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return 1.0 / f;
}

// Tensor-product composite Gauss-Legendre over a box whose per-dimension breakpoints are given.
std::complex<double> tensor_integrate(const std::function<std::complex<double>(std::span<const double>)>& f,
                                      const std::vector<std::vector<double>>& breaks, int panels,
                                      const GaussLegendreRule& rule) {
  const std::size_t dim = breaks.size();
  if (dim == 0) {
    return f(std::span<const double>());
  }
  std::vector<std::vector<double>> nodes(dim), weights(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t iv = 0; iv + 1 < breaks[k].size(); ++iv) {
      const double lo = breaks[k][iv], width = (breaks[k][iv + 1] - lo) / panels;
      for (int p = 0; p < panels; ++p) {
        const double half = 0.5 * width, mid = lo + width * p + half;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          nodes[k].push_back(mid + half * rule.nodes[j]);
          weights[k].push_back(half * rule.weights[j]);
        }
      }
    }
  }
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> x(dim);
  std::complex<double> total = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t k = 0; k < dim; ++k) {
      x[k] = nodes[k][idx[k]];
      w *= weights[k][idx[k]];
    }
    total += w * f(x);
    std::size_t k = 0;
    while (k < dim && ++idx[k] == nodes[k].size()) idx[k++] = 0;
    if (k == dim) break;
  }
  return total;
}

}  // namespace

EMResult em_sum_1d(const SmoothFunction1D& G, double a, double b, int K, const QuadratureSpec& quad) {
  if (!(a < b)) throw DomainError("em_sum_1d: a must be smaller than b");
  if (K < 1) throw DomainError("em_sum_1d: K must be at least 1");
  validate(quad);
  const auto breaks = integer_breaks(a, b);

  const QuadResult main = integrate_adaptive([&](double x) { return G(x, 0); }, breaks, quad);
  std::complex<double> total = main.value;
  double err = main.error_estimate;

  for (int kappa = 1; kappa <= K; ++kappa) {
    const double c = sign_pow(kappa) * inv_factorial(kappa);
    total += c * (periodic_bernoulli(kappa, b) * G(b, kappa - 1) - periodic_bernoulli(kappa, a) * G(a, kappa - 1));
  }

  const auto& bk = bernoulli_poly(K);
  const QuadResult rem = integrate_adaptive(
      [&](double x) { return bk(x - std::floor(x)) * G(x, K); },
      breaks, quad);
  total -= sign_pow(K) * inv_factorial(K) * rem.value;
  err += inv_factorial(K) * rem.error_estimate;
  return {total, err};
}

EMResult em_sum_multi(const SmoothFunctionND& g, const Box& box, int K, const QuadratureSpec& quad) {
  validate(box);
  validate(quad);
  const int s = box.s();
  if (s > 3) throw DomainError("em_sum_multi: dimension guard, s must be at most 3");
  if (K < 1) throw DomainError("em_sum_multi: K must be at least 1");
  const auto a = box.a_double(), b = box.b_double();
  const auto& rule = gauss_legendre(quad.base_order);
  const auto& bk = bernoulli_poly(K);

  // Boundary weights per variable: upper face (role 1) and lower face (role 2) for each order.
  std::vector<std::vector<double>> upper(static_cast<std::size_t>(s)), lower(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    for (int kappa = 1; kappa <= K; ++kappa) {
      const double c = inv_factorial(kappa);
      upper[static_cast<std::size_t>(i)].push_back(sign_pow(kappa) * c * periodic_bernoulli(kappa, box.b[static_cast<std::size_t>(i)]).get_d());
      lower[static_cast<std::size_t>(i)].push_back(sign_pow(kappa + 1) * c * periodic_bernoulli(kappa, box.a[static_cast<std::size_t>(i)]).get_d());
    }
  }

  // role: 1 -> I1 (b face), 2 -> I2 (a face), 3 -> I3 (integrated), 4 -> I4 (remainder).
  int partitions = 1;
  for (int i = 0; i < s; ++i) partitions *= 4;

  auto evaluate_all = [&](int panels) {
    std::complex<double> total = 0.0;
    std::vector<int> role(static_cast<std::size_t>(s));
    for (int code = 0; code < partitions; ++code) {
      int c = code;
      for (int i = 0; i < s; ++i) {
        role[static_cast<std::size_t>(i)] = 1 + c % 4;
        c /= 4;
      }
      std::vector<int> face_vars, int_vars;
      double rem_coeff = 1.0;
      for (int i = 0; i < s; ++i) {
        const int r = role[static_cast<std::size_t>(i)];
        if (r <= 2) face_vars.push_back(i);
        else int_vars.push_back(i);
        if (r == 4) rem_coeff *= sign_pow(K + 1) * inv_factorial(K);
      }
      std::vector<std::vector<double>> breaks;
      for (int i : int_vars) breaks.push_back(integer_breaks(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]));

      // Every face variable carries its own order kappa_i in 1..K.
      std::vector<int> kappa_face(face_vars.size(), 1);
      for (;;) {
        double face_coeff = rem_coeff;
        std::vector<int> deriv(static_cast<std::size_t>(s), 0);
        std::vector<double> x(static_cast<std::size_t>(s), 0.0);
        for (std::size_t f = 0; f < face_vars.size(); ++f) {
          const int i = face_vars[f];
          const int kap = kappa_face[f];
          const bool up = role[static_cast<std::size_t>(i)] == 1;
          face_coeff *= up ? upper[static_cast<std::size_t>(i)][static_cast<std::size_t>(kap - 1)]
                           : lower[static_cast<std::size_t>(i)][static_cast<std::size_t>(kap - 1)];
          deriv[static_cast<std::size_t>(i)] = kap - 1;
          x[static_cast<std::size_t>(i)] = up ? b[static_cast<std::size_t>(i)] : a[static_cast<std::size_t>(i)];
        }
        for (int i : int_vars) {
          if (role[static_cast<std::size_t>(i)] == 4) deriv[static_cast<std::size_t>(i)] = K;
        }
        if (face_coeff != 0.0) {
          auto integrand = [&](std::span<const double> y) -> std::complex<double> {
            std::vector<double> xx = x;
            double w = 1.0;
            for (std::size_t k = 0; k < int_vars.size(); ++k) {
              const int i = int_vars[k];
              xx[static_cast<std::size_t>(i)] = y[k];
              if (role[static_cast<std::size_t>(i)] == 4) w *= bk(y[k] - std::floor(y[k]));
            }
            return w * g(xx, deriv);
          };
          total += face_coeff * tensor_integrate(integrand, breaks, panels, rule);
        }
        std::size_t f = 0;
        while (f < kappa_face.size() && ++kappa_face[f] > K) kappa_face[f++] = 1;
        if (f == kappa_face.size()) break;
      }
    }
    return total;
  };

  int panels = 1;
  std::complex<double> coarse = evaluate_all(panels);
  double err = 0.0;
  for (int level = 0; level < quad.max_refinements; ++level) {
    panels *= 2;
    const std::complex<double> fine = evaluate_all(panels);
    err = std::abs(fine - coarse);
    if (err <= std::max(quad.abs_tol, quad.rel_tol * std::abs(fine))) return {fine, err};
    coarse = fine;
  }
  throw ConvergenceError("em_sum_multi: panel refinement budget exhausted", coarse.real(), err);
}

}  // namespace circlekit
