#pragma once

#include <span>
#include <utility>
#include <vector>

#include "circlekit/polynomial.hpp"

namespace circlekit {

struct FormMonomial {
  Exponents exponents;
  Integer coefficient;
};

// Integral homogeneous form F of degree d in s variables.
class HomogeneousForm {
 public:
  HomogeneousForm(int s, int d, Polynomial poly);
  static HomogeneousForm from_monomials(int s, const std::vector<FormMonomial>& monomials);

  int s() const { return s_; }
  int d() const { return d_; }
  const Polynomial& polynomial() const { return poly_; }

  // Groups of variables that never share a monomial with a variable outside the group.
  // F splits as a sum of forms in disjoint variable groups; unused variables form singleton
  // groups. Groups are sorted by their smallest member.
  std::vector<std::vector<int>> components() const;

  bool operator==(const HomogeneousForm& other) const = default;

 private:
  int s_;
  int d_;
  Polynomial poly_;
};

struct FormMetadata {
  // Affine dimension of the singular locus; -1 when unknown.
  int singular_locus_dim = -1;
};

Integer evaluate_integer(const HomogeneousForm& F, std::span<const Integer> x);
Integer evaluate_integer(const HomogeneousForm& F, std::span<const long long> x);

// Formal derivative with respect to variable i (0-based).
Polynomial partial_derivative(const HomogeneousForm& F, int i);

// d^kappa e(gamma F) = sum_{a=1}^{|kappa|} (2 pi i gamma)^a g_a(x) e(gamma F(x)).
struct DerivativeDecomposition {
  Exponents kappa;
  std::vector<Polynomial> g;  // g[a-1] holds g_a

  const Polynomial& term(int a) const { return g.at(static_cast<std::size_t>(a - 1)); }
};

DerivativeDecomposition derivative_decomposition(const HomogeneousForm& F, const Exponents& kappa);

// Same recursion but raising kappa one unit at a time in the supplied variable order.
DerivativeDecomposition derivative_decomposition_ordered(const HomogeneousForm& F,
                                                         const std::vector<int>& order);

std::pair<HomogeneousForm, FormMetadata> diagonal_form(int d, int s);

}  // namespace circlekit
