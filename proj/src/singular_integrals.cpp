#include "circlekit/singular_integrals.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <memory>

#include "circlekit/errors.hpp"
#include "circlekit/kernels.hpp"
#include "circlekit/parallel.hpp"

namespace circlekit {

namespace {

constexpr std::size_t kBlock = 2048;

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string describe(const RealPolynomial& p) {
  std::string out = "[";
  for (const auto& m : p.monomials()) {
    out += hex(m.coefficient) + ":";
    for (int e : m.exponents) out += std::to_string(e) + ",";
    out += ";";
  }
  return out + "]";
}

std::complex<double> unit(double theta) {
  const double r = theta - std::nearbyint(theta);
  return {std::cos(2.0 * std::numbers::pi * r), std::sin(2.0 * std::numbers::pi * r)};
}

int coarse_order(int order) { return std::max(2, (3 * order) / 4); }

struct NodeSet {
  std::vector<double> x, w;
};

NodeSet composite_nodes(double lo, double hi, int panels, const GaussLegendreRule& rule) {
  NodeSet out;
  const double width = (hi - lo) / panels;
  out.x.reserve(static_cast<std::size_t>(panels) * rule.nodes.size());
  out.w.reserve(out.x.capacity());
  for (int p = 0; p < panels; ++p) {
    const double half = 0.5 * width, mid = lo + width * p + half;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      out.x.push_back(mid + half * rule.nodes[j]);
      out.w.push_back(half * rule.weights[j]);
    }
  }
  return out;
}

struct NodeData {
  std::uint64_t id;
  const void* factor;
  std::vector<int> panels;
  int order;
  std::vector<double> phase, weight;
  std::vector<std::vector<double>> amp;
};

constexpr std::size_t kCacheEntries = 6;
constexpr double kCacheNodeLimit = 2.0e6;

std::atomic<std::uint64_t> next_evaluator_id{1};

// Integer of the form m * 2^e with m in {4,5,6,7}, at least p.
int quantize_panels(int p) {
  if (p <= 4) return p;
  int e = 0;
  while ((7 << e) < p) ++e;
  for (int m = 4; m <= 7; ++m) {
    if ((m << e) >= p) return m << e;
  }
  return 7 << e;
}

}  // namespace

JEvaluator::JEvaluator(const HomogeneousForm& F, const IndexTuple& t, const Box& box, const QuadratureSpec& quad,
                       double node_budget)
    : quad_(quad), node_budget_(node_budget), id_(next_evaluator_id.fetch_add(1)) {
  validate(t, F.s());
  validate(box);
  validate(quad);
  if (box.s() != F.s()) throw DomainError("box dimension differs from the number of variables");
  const int s = F.s();
  const auto roles = t.roles();
  const auto free = t.I3();
  if (free.size() > 6) throw DomainError("J_gamma: at most 6 free variables are supported");
  const auto a = box.a_double(), b = box.b_double();

  std::vector<double> pin_values(static_cast<std::size_t>(s), 0.0);
  for (int i = 0; i < s; ++i) {
    const int r = roles[static_cast<std::size_t>(i)];
    pin_values[static_cast<std::size_t>(i)] = r == 1 ? b[static_cast<std::size_t>(i)] : (r == 2 ? a[static_cast<std::size_t>(i)] : 0.0);
  }

  std::map<std::string, std::size_t> seen;
  double range_lo = 0.0, range_hi = 0.0;
  for (const auto& group : F.components()) {
    Polynomial FC(s);
    for (const auto& [e, c] : F.polynomial().terms()) {
      bool touches = false;
      for (int v : group) touches = touches || e[static_cast<std::size_t>(v)] > 0;
      if (touches) FC.add_term(e, c);
    }
    std::vector<bool> pinned(static_cast<std::size_t>(s), true);
    Factor f;
    for (int v : group) {
      if (roles[static_cast<std::size_t>(v)] == 0) {
        pinned[static_cast<std::size_t>(v)] = false;
        f.lo.push_back(a[static_cast<std::size_t>(v)]);
        f.hi.push_back(b[static_cast<std::size_t>(v)]);
      }
    }
    f.phase = pin_variables(FC, pinned, pin_values);
    Exponents kappa(static_cast<std::size_t>(s), 0);
    int order = 0;
    for (int v : group) {
      kappa[static_cast<std::size_t>(v)] = t.tau[static_cast<std::size_t>(v)];
      order += t.tau[static_cast<std::size_t>(v)];
    }
    if (order > 0) {
      if (FC.is_zero()) {
        f.amp.push_back(RealPolynomial(static_cast<int>(f.lo.size()), {}));
      } else {
        const auto dd = derivative_decomposition(HomogeneousForm(s, F.d(), FC), kappa);
        for (const auto& g : dd.g) f.amp.push_back(pin_variables(g, pinned, pin_values));
      }
    }
    for (std::size_t j = 0; j < f.lo.size(); ++j) {
      f.grad_bound.push_back(f.phase.derivative_bound(static_cast<int>(j), f.lo, f.hi));
    }
    const auto [plo, phi] = f.phase.range(f.lo, f.hi);
    range_lo += plo;
    range_hi += phi;

    f.key = "phase=" + describe(f.phase) + "amp=";
    for (const auto& g : f.amp) f.key += describe(g);
    f.key += "box=";
    for (std::size_t j = 0; j < f.lo.size(); ++j) f.key += hex(f.lo[j]) + ":" + hex(f.hi[j]) + ",";
    auto it = seen.find(f.key);
    if (it != seen.end()) {
      ++factors_[it->second].multiplicity;
    } else {
      seen.emplace(f.key, factors_.size());
      factors_.push_back(std::move(f));
    }
  }
  range_ = {range_lo, range_hi};

  // Full-degree monomials supported on the free variables survive the pinning unchanged.
  unguaranteed_ = true;
  for (const auto& [e, c] : F.polynomial().terms()) {
    bool inside = true;
    for (int i = 0; i < s; ++i) {
      if (e[static_cast<std::size_t>(i)] > 0 && roles[static_cast<std::size_t>(i)] != 0) inside = false;
    }
    if (inside) unguaranteed_ = false;
  }

  std::vector<std::string> parts;
  for (const auto& f : factors_) parts.push_back(std::to_string(f.multiplicity) + "x" + f.key);
  std::sort(parts.begin(), parts.end());
  for (const auto& p : parts) signature_ += p + "|";
}

std::complex<double> JEvaluator::factor_rule(const Factor& f, double gamma, const std::vector<int>& panels,
                                             int order) const {
  const auto& rule = gauss_legendre(order);
  const std::size_t dim = f.lo.size();
  std::vector<std::complex<double>> amp_scale;
  std::complex<double> power = 1.0;
  for (std::size_t a = 0; a < f.amp.size(); ++a) {
    power *= std::complex<double>(0.0, 2.0 * std::numbers::pi * gamma);
    amp_scale.push_back(power);
  }

  double count = 1.0;
  for (std::size_t j = 0; j < dim; ++j) count *= static_cast<double>(panels[j]) * rule.nodes.size();

  thread_local std::vector<std::shared_ptr<NodeData>> cache;
  std::shared_ptr<NodeData> data;
  for (std::size_t k = 0; k < cache.size(); ++k) {
    const auto& c = cache[k];
    if (c->id == id_ && c->factor == &f && c->order == order && c->panels == panels) {
      data = c;
      std::rotate(cache.begin(), cache.begin() + static_cast<std::ptrdiff_t>(k), cache.begin() + static_cast<std::ptrdiff_t>(k) + 1);
      break;
    }
  }
  if (!data) {
    data = std::make_shared<NodeData>();
    data->id = id_;
    data->factor = &f;
    data->panels = panels;
    data->order = order;
    const auto n = static_cast<std::size_t>(count);
    data->phase.reserve(n);
    data->weight.reserve(n);
    data->amp.assign(f.amp.size(), {});
    for (auto& v : data->amp) v.reserve(n);
    std::vector<NodeSet> nodes;
    for (std::size_t j = 0; j < dim; ++j) nodes.push_back(composite_nodes(f.lo[j], f.hi[j], panels[j], rule));
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> x(dim);
    for (;;) {
      double w = 1.0;
      for (std::size_t j = 0; j < dim; ++j) {
        x[j] = nodes[j].x[idx[j]];
        w *= nodes[j].w[idx[j]];
      }
      data->weight.push_back(w);
      data->phase.push_back(f.phase.evaluate(x));
      for (std::size_t a = 0; a < f.amp.size(); ++a) data->amp[a].push_back(f.amp[a].evaluate(x));
      std::size_t j = 0;
      while (j < dim && ++idx[j] == nodes[j].x.size()) idx[j++] = 0;
      if (j == dim) break;
    }
    if (count <= kCacheNodeLimit) {
      cache.insert(cache.begin(), data);
      if (cache.size() > kCacheEntries) cache.pop_back();
    }
  }

  const auto& ops = kernels::active_ops();
  std::vector<double> theta(kBlock), wre(kBlock), wim(kBlock);
  std::complex<double> total = 0.0;
  const std::size_t n = data->phase.size();
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t len = std::min(kBlock, n - start);
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t i = start + k;
      theta[k] = gamma * data->phase[i];
      std::complex<double> weight = data->weight[i];
      if (!f.amp.empty()) {
        std::complex<double> a_sum = 0.0;
        for (std::size_t a = 0; a < f.amp.size(); ++a) a_sum += amp_scale[a] * data->amp[a][i];
        weight *= a_sum;
      }
      wre[k] = weight.real();
      wim[k] = weight.imag();
    }
    total += ops.weighted_expi_sum(theta.data(), wre.data(), wim.data(), len);
  }
  return total;
}

JEvaluator::Eval JEvaluator::evaluate_factor(const Factor& f, double gamma) const {
  const std::size_t dim = f.lo.size();
  if (dim == 0) {
    return {factor_rule(f, gamma, {}, 1), 0.0};
  }
  std::vector<int> panels(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double turns = std::abs(gamma) * f.grad_bound[j] * (f.hi[j] - f.lo[j]);
    panels[j] = quantize_panels(
        std::max(2, static_cast<int>(std::ceil(quad_.panels_per_unit_frequency * std::max(1.0, turns)))));
  }
  double err = 0.0;
  std::complex<double> fine = 0.0;
  for (int level = 0; level <= quad_.max_refinements; ++level) {
    double nodes = 1.0;
    for (std::size_t j = 0; j < dim; ++j) nodes *= static_cast<double>(panels[j]) * quad_.base_order;
    if (nodes > node_budget_) {
      throw BudgetExceeded("J_gamma: tensor quadrature needs " + std::to_string(static_cast<long long>(nodes)) +
                           " nodes, above the node budget");
    }
    fine = factor_rule(f, gamma, panels, quad_.base_order);
    const std::complex<double> coarse = factor_rule(f, gamma, panels, coarse_order(quad_.base_order));
    err = std::abs(fine - coarse);
    if (err <= std::max(quad_.abs_tol, quad_.rel_tol * std::abs(fine))) return {fine, err};
    for (auto& p : panels) p *= 2;
  }
  throw ConvergenceError("J_gamma: inner quadrature did not converge at gamma=" + std::to_string(gamma), fine.real(),
                         err);
}

JEvaluator::Eval JEvaluator::operator()(double gamma) const {
  std::vector<Eval> parts;
  parts.reserve(factors_.size());
  for (const auto& f : factors_) parts.push_back(evaluate_factor(f, gamma));
  std::complex<double> value = 1.0;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    for (int m = 0; m < factors_[k].multiplicity; ++m) value *= parts[k].value;
  }
  double err = 0.0;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    double others = 1.0;
    for (std::size_t l = 0; l < factors_.size(); ++l) {
      const int mult = factors_[l].multiplicity - (l == k ? 1 : 0);
      others *= std::pow(std::abs(parts[l].value), mult);
    }
    err += factors_[k].multiplicity * parts[k].error * others;
  }
  return {value, err};
}

std::complex<double> J_gamma(const HomogeneousForm& F, const IndexTuple& t, const Box& box, double gamma,
                             const QuadratureSpec& quad) {
  return JEvaluator(F, t, box, quad)(gamma).value;
}

namespace {

std::mutex cache_mutex;
std::map<std::string, IntegralValue> integral_cache;
CacheStats cache_stats;

struct BandResult {
  std::complex<double> value;
  double error;
};

BandResult integrate_band(const JEvaluator& J, double lo, double hi, double n, double freq,
                          const QuadratureSpec& quad, int threads) {
  int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * quad.gamma_panels * freq)));
  double err = 0.0;
  std::complex<double> fine = 0.0;
  for (int level = 0; level <= quad.max_refinements; ++level) {
    const NodeSet fn = composite_nodes(lo, hi, panels, gauss_legendre(quad.base_order));
    const NodeSet cn = composite_nodes(lo, hi, panels, gauss_legendre(coarse_order(quad.base_order)));
    std::vector<double> gammas = fn.x;
    gammas.insert(gammas.end(), cn.x.begin(), cn.x.end());
    std::vector<std::complex<double>> values(gammas.size());
    parallel_for(gammas.size(), threads, [&](std::size_t k) {
      values[k] = J(gammas[k]).value * unit(-gammas[k] * n);
    });
    fine = 0.0;
    std::complex<double> coarse = 0.0;
    for (std::size_t k = 0; k < fn.x.size(); ++k) fine += fn.w[k] * values[k];
    for (std::size_t k = 0; k < cn.x.size(); ++k) coarse += cn.w[k] * values[fn.x.size() + k];
    err = std::abs(fine - coarse);
    if (err <= std::max(quad.abs_tol, quad.rel_tol * std::abs(fine))) return {fine, err};
    panels *= 2;
  }
  throw ConvergenceError("truncated_singular_integral: gamma band [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] did not converge",
                         fine.real(), err);
}

}  // namespace

void clear_integral_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  integral_cache.clear();
  cache_stats = {};
}

CacheStats integral_cache_stats() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache_stats;
}

IntegralValue truncated_singular_integral(const HomogeneousForm& F, const IndexTuple& t, const Box& box, double n,
                                          double Q, const QuadratureSpec& quad, const IntegralOptions& opts) {
  if (!(Q >= 1.0)) throw DomainError("truncated_singular_integral: Q must be at least 1");
  const JEvaluator J(F, t, box, quad, opts.node_budget);

  std::string key;
  if (opts.use_cache) {
    key = J.signature() + "#n=" + hex(n) + "#Q=" + hex(Q) + "#quad=" + std::to_string(quad.base_order) + "," +
          hex(quad.panels_per_unit_frequency) + "," + std::to_string(quad.gamma_panels) + "," + hex(quad.abs_tol) +
          "," + hex(quad.rel_tol) + "," + std::to_string(quad.max_refinements) +
          (opts.use_conjugate_symmetry ? "#sym" : "#full");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = integral_cache.find(key);
    if (it != integral_cache.end()) {
      ++cache_stats.hits;
      return it->second;
    }
    ++cache_stats.misses;
  }

  const auto [plo, phi] = J.phase_range();
  const double freq = std::max(1.0, std::max(std::abs(phi - n), std::abs(plo - n)));
  std::vector<double> edges{Q};
  while (edges.back() > 1.0) edges.push_back(edges.back() / 2.0);
  edges.push_back(0.0);
  std::reverse(edges.begin(), edges.end());
  const int threads = opts.threads > 0 ? opts.threads : default_threads();

  IntegralValue out;
  out.Q = Q;
  out.convergence_unguaranteed = J.convergence_unguaranteed();
  std::complex<double> positive = 0.0, negative = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const BandResult up = integrate_band(J, edges[k], edges[k + 1], n, freq, quad, threads);
    positive += up.value;
    out.error_estimate += up.error;
    BandResult down{std::conj(up.value), up.error};
    if (!opts.use_conjugate_symmetry) {
      down = integrate_band(J, -edges[k + 1], -edges[k], n, freq, quad, threads);
    }
    negative += down.value;
    out.error_estimate += down.error;
    if (k + 2 == edges.size()) out.tail_estimate = std::abs(up.value) + std::abs(down.value);
  }
  if (opts.use_conjugate_symmetry) {
    out.value = {2.0 * positive.real(), 0.0};
  } else {
    out.value = positive + negative;
  }
  out.imag_residual = std::abs(out.value.imag());

  if (opts.use_cache) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    integral_cache.emplace(key, out);
  }
  return out;
}

double mollifier_c0() {
  static const double c0 = [] {
    QuadratureSpec spec;
    spec.abs_tol = 1e-16;
    spec.rel_tol = 1e-15;
    spec.max_refinements = 14;
    const auto bump = [](double x) -> std::complex<double> {
      const double t = 1.0 - x * x;
      return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
    };
    return 1.0 / integrate_adaptive(bump, {-1.0, -0.5, 0.0, 0.5, 1.0}, spec, 4).value.real();
  }();
  return c0;
}

double mollifier(double y) {
  const double t = 1.0 - y * y;
  return t > 0.0 ? mollifier_c0() * std::exp(-1.0 / t) : 0.0;
}

MollifiedValue mollified_integral(const HomogeneousForm& F, const std::vector<int>& I1, const std::vector<int>& I2,
                                  const Box& box, double n, const std::vector<double>& x_I1,
                                  const std::vector<double>& x_I2, double T, const QuadratureSpec& quad) {
  if (!(T > 0)) throw DomainError("mollified_integral: T must be positive");
  validate(box);
  validate(quad);
  if (I1.size() != x_I1.size() || I2.size() != x_I2.size()) {
    throw DomainError("mollified_integral: pinned values do not match the index sets");
  }
  const int s = F.s();
  IndexTuple t = make_tuple(s, I1, I2);
  std::vector<bool> pinned(static_cast<std::size_t>(s), false);
  std::vector<double> values(static_cast<std::size_t>(s), 0.0);
  for (std::size_t k = 0; k < I1.size(); ++k) {
    pinned[static_cast<std::size_t>(I1[k])] = true;
    values[static_cast<std::size_t>(I1[k])] = x_I1[k];
  }
  for (std::size_t k = 0; k < I2.size(); ++k) {
    pinned[static_cast<std::size_t>(I2[k])] = true;
    values[static_cast<std::size_t>(I2[k])] = x_I2[k];
  }
  const RealPolynomial f = pin_variables(F.polynomial(), pinned, values);
  std::vector<double> lo, hi;
  for (int i : t.I3()) {
    lo.push_back(box.a[static_cast<std::size_t>(i)].get_d());
    hi.push_back(box.b[static_cast<std::size_t>(i)].get_d());
  }
  const std::size_t dim = lo.size();
  const auto kernel = [&](double value) { return T * mollifier(T * (value - n)); };
  if (dim == 0) return {kernel(f.evaluate({})), 0.0};

  const double half_support = 1.0 / T;
  const double leaf_width = 0.25 / T;
  const auto& fine_rule = gauss_legendre(quad.base_order);
  const auto& coarse_rule = gauss_legendre(coarse_order(quad.base_order));

  auto leaf = [&](const std::vector<double>& l, const std::vector<double>& h, const GaussLegendreRule& rule) {
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> x(dim);
    double total = 0.0;
    const std::size_t m = rule.nodes.size();
    for (;;) {
      double w = 1.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double half = 0.5 * (h[j] - l[j]);
        x[j] = l[j] + half + half * rule.nodes[idx[j]];
        w *= half * rule.weights[idx[j]];
      }
      total += w * kernel(f.evaluate(x));
      std::size_t j = 0;
      while (j < dim && ++idx[j] == m) idx[j++] = 0;
      if (j == dim) break;
    }
    return total;
  };

  struct Cell {
    std::vector<double> lo, hi;
    int depth;
  };
  std::vector<Cell> stack{{lo, hi, 0}};
  double value = 0.0, err = 0.0;
  std::size_t leaves = 0;
  while (!stack.empty()) {
    Cell cell = std::move(stack.back());
    stack.pop_back();
    const auto [rlo, rhi] = f.range(cell.lo, cell.hi);
    if (rhi <= n - half_support || rlo >= n + half_support) continue;
    if (rhi - rlo <= leaf_width || cell.depth >= 64) {
      const double v = leaf(cell.lo, cell.hi, fine_rule);
      value += v;
      err += std::abs(v - leaf(cell.lo, cell.hi, coarse_rule));
      if (++leaves > 50'000'000) throw BudgetExceeded("mollified_integral: too many leaf cells");
      continue;
    }
    std::size_t split = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double score = f.derivative_bound(static_cast<int>(j), cell.lo, cell.hi) * (cell.hi[j] - cell.lo[j]);
      if (score > best) {
        best = score;
        split = j;
      }
    }
    const double mid = 0.5 * (cell.lo[split] + cell.hi[split]);
    Cell upper = cell;
    upper.lo[split] = mid;
    upper.depth = cell.depth + 1;
    cell.hi[split] = mid;
    cell.depth += 1;
    stack.push_back(std::move(upper));
    stack.push_back(std::move(cell));
  }
  return {value, err};
}

double waring_gamma_closed_form(int d, int s_eff) {
  if (d < 2) throw DomainError("waring_gamma_closed_form: d must be at least 2");
  if (s_eff < 1) throw DomainError("waring_gamma_closed_form: s_eff must be at least 1");
  return std::pow(std::tgamma(1.0 + 1.0 / d), s_eff) / std::tgamma(static_cast<double>(s_eff) / d);
}

std::pair<double, double> scaled_integral_check(int d, int s_eff, double t_scale, const QuadratureSpec& quad,
                                                double Q, const IntegralOptions& opts) {
  if (!(t_scale > 0)) throw DomainError("scaled_integral_check: t_scale must be positive");
  const auto [F, meta] = diagonal_form(d, s_eff);
  const IndexTuple t0 = make_tuple(s_eff, {}, {});
  const double direct = truncated_singular_integral(F, t0, unit_box(s_eff), t_scale, Q, quad, opts).value.real();
  const Rational edge(std::pow(t_scale, -1.0 / d));
  Box wide{std::vector<Rational>(static_cast<std::size_t>(s_eff), Rational(0)),
           std::vector<Rational>(static_cast<std::size_t>(s_eff), edge)};
  const double Q2 = std::max(1.0, Q * t_scale);
  const double rescaled = truncated_singular_integral(F, t0, wide, 1.0, Q2, quad, opts).value.real();
  const double factor = std::pow(t_scale, static_cast<double>(s_eff) / d - 1.0);
  return {direct, factor * rescaled};
}

}  // namespace circlekit
