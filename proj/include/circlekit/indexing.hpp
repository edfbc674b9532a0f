#pragma once

#include <span>
#include <string>
#include <vector>

#include "circlekit/rational.hpp"

namespace circlekit {

// Label (I1, I2, tau) of one expansion term. Variable indices are 0-based internally;
// the textual form printed by to_string is 1-based.
struct IndexTuple {
  std::vector<int> I1;
  std::vector<int> I2;
  std::vector<int> tau;

  int s() const { return static_cast<int>(tau.size()); }
  int tau_norm() const;
  int weight() const;
  std::vector<int> I3() const;
  // 0 free, 1 pinned to b, 2 pinned to a.
  std::vector<int> roles() const;

  bool operator==(const IndexTuple&) const = default;
};

// Throws DomainError when the tuple violates disjointness, sortedness or the tau support rule.
void validate(const IndexTuple& t, int s);

// Weight ascending, then lexicographic on (I1, I2, tau).
bool canonical_less(const IndexTuple& x, const IndexTuple& y);

std::string to_string(const IndexTuple& t);
IndexTuple make_tuple(int s, std::vector<int> I1, std::vector<int> I2, std::vector<int> tau = {});

struct Box {
  std::vector<Rational> a;
  std::vector<Rational> b;

  int s() const { return static_cast<int>(a.size()); }
  std::vector<double> a_double() const;
  std::vector<double> b_double() const;
  bool operator==(const Box&) const = default;
};

void validate(const Box& box);
Box unit_box(int s);       // (0, 1]^s
Box symmetric_box(int s);  // (-1, 1]^s

std::vector<IndexTuple> enumerate_index_set(int s, int K);

std::vector<double> sigma_select(std::span<const double> x, const Box& box, const IndexTuple& t);

IndexTuple dual_tuple(const IndexTuple& t);

}  // namespace circlekit
