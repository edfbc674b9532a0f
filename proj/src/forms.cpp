#include "circlekit/forms.hpp"

#include <numeric>

#include "circlekit/errors.hpp"

namespace circlekit {

HomogeneousForm::HomogeneousForm(int s, int d, Polynomial poly) : s_(s), d_(d), poly_(std::move(poly)) {
  if (s < 1) throw DomainError("HomogeneousForm: s must be at least 1");
  if (d < 1) throw DomainError("HomogeneousForm: d must be at least 1");
  if (poly_.num_vars() != s) throw DomainError("HomogeneousForm: polynomial has wrong variable count");
  if (poly_.is_zero()) throw DomainError("HomogeneousForm: the zero polynomial is not a form");
  if (!poly_.is_homogeneous_of_degree(d)) {
    throw DomainError("HomogeneousForm: every monomial must have total degree d");
  }
}

HomogeneousForm HomogeneousForm::from_monomials(int s, const std::vector<FormMonomial>& monomials) {
  if (s < 1) throw DomainError("HomogeneousForm: s must be at least 1");
  Polynomial p(s);
  int degree = -1;
  for (const auto& m : monomials) {
    if (static_cast<int>(m.exponents.size()) != s) {
      throw DomainError("HomogeneousForm: exponent vector length differs from s");
    }
    const int deg = std::accumulate(m.exponents.begin(), m.exponents.end(), 0);
    if (degree == -1) degree = deg;
    if (deg != degree) throw DomainError("HomogeneousForm: monomials of different degree");
    p.add_term(m.exponents, m.coefficient);
  }
  if (degree < 1) throw DomainError("HomogeneousForm: degree must be at least 1");
  return HomogeneousForm(s, degree, std::move(p));
}

std::vector<std::vector<int>> HomogeneousForm::components() const {
  std::vector<int> parent(static_cast<std::size_t>(s_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (const auto& [e, c] : poly_.terms()) {
    int first = -1;
    for (int i = 0; i < s_; ++i) {
      if (e[static_cast<std::size_t>(i)] == 0) continue;
      if (first < 0) {
        first = i;
      } else {
        const int a = find(first), b = find(i);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(static_cast<std::size_t>(s_), -1);
  for (int i = 0; i < s_; ++i) {
    const int root = find(i);
    if (slot[static_cast<std::size_t>(root)] < 0) {
      slot[static_cast<std::size_t>(root)] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(i);
  }
  return groups;
}

Integer evaluate_integer(const HomogeneousForm& F, std::span<const Integer> x) {
  return F.polynomial().evaluate(x);
}

Integer evaluate_integer(const HomogeneousForm& F, std::span<const long long> x) {
  return F.polynomial().evaluate(x);
}

Polynomial partial_derivative(const HomogeneousForm& F, int i) {
  if (i < 0 || i >= F.s()) throw DomainError("partial_derivative: variable index out of range");
  return F.polynomial().derivative(i);
}

DerivativeDecomposition derivative_decomposition_ordered(const HomogeneousForm& F,
                                                         const std::vector<int>& order) {
  if (order.empty()) throw DomainError("derivative_decomposition: |kappa| must be at least 1");
  const int s = F.s();
  DerivativeDecomposition out;
  out.kappa.assign(static_cast<std::size_t>(s), 0);
  std::vector<Polynomial> grad;
  grad.reserve(static_cast<std::size_t>(s));
  for (int j = 0; j < s; ++j) grad.push_back(F.polynomial().derivative(j));

  // Current list holds g_1..g_k for the multi-index built so far (k = its order).
  std::vector<Polynomial> g;
  for (int j : order) {
    if (j < 0 || j >= s) throw DomainError("derivative_decomposition: variable index out of range");
    std::vector<Polynomial> next(g.size() + 1, Polynomial(s));
    if (g.empty()) {
      next[0] = grad[static_cast<std::size_t>(j)];
    } else {
      for (std::size_t a = 0; a < next.size(); ++a) {
        Polynomial value(s);
        if (a < g.size()) value = g[a].derivative(j);
        if (a >= 1) value = value + g[a - 1] * grad[static_cast<std::size_t>(j)];
        next[a] = std::move(value);
      }
    }
    g = std::move(next);
    ++out.kappa[static_cast<std::size_t>(j)];
  }
  out.g = std::move(g);
  return out;
}

DerivativeDecomposition derivative_decomposition(const HomogeneousForm& F, const Exponents& kappa) {
  if (static_cast<int>(kappa.size()) != F.s()) {
    throw DomainError("derivative_decomposition: multi-index length differs from s");
  }
  std::vector<int> order;
  for (int j = 0; j < F.s(); ++j) {
    if (kappa[static_cast<std::size_t>(j)] < 0) throw DomainError("derivative_decomposition: negative order");
    for (int k = 0; k < kappa[static_cast<std::size_t>(j)]; ++k) order.push_back(j);
  }
  return derivative_decomposition_ordered(F, order);
}

std::pair<HomogeneousForm, FormMetadata> diagonal_form(int d, int s) {
  if (d < 2) throw DomainError("diagonal_form: d must be at least 2");
  if (s < 1) throw DomainError("diagonal_form: s must be at least 1");
  Polynomial p(s);
  for (int i = 0; i < s; ++i) {
    Exponents e(static_cast<std::size_t>(s), 0);
    e[static_cast<std::size_t>(i)] = d;
    p.add_term(e, 1);
  }
  return {HomogeneousForm(s, d, std::move(p)), FormMetadata{0}};
}

}  // namespace circlekit
