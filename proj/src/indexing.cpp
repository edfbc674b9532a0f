#include "circlekit/indexing.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "circlekit/errors.hpp"

namespace circlekit {

int IndexTuple::tau_norm() const { return std::accumulate(tau.begin(), tau.end(), 0); }

int IndexTuple::weight() const {
  return static_cast<int>(I1.size() + I2.size()) + tau_norm();
}

std::vector<int> IndexTuple::roles() const {
  std::vector<int> r(tau.size(), 0);
  for (int i : I1) r[static_cast<std::size_t>(i)] = 1;
  for (int i : I2) r[static_cast<std::size_t>(i)] = 2;
  return r;
}

std::vector<int> IndexTuple::I3() const {
  std::vector<int> out;
  const auto r = roles();
  for (int i = 0; i < s(); ++i) {
    if (r[static_cast<std::size_t>(i)] == 0) out.push_back(i);
  }
  return out;
}

void validate(const IndexTuple& t, int s) {
  if (static_cast<int>(t.tau.size()) != s) throw DomainError("IndexTuple: tau has wrong length");
  std::vector<int> seen(static_cast<std::size_t>(s), 0);
  for (const auto* set : {&t.I1, &t.I2}) {
    if (!std::is_sorted(set->begin(), set->end())) throw DomainError("IndexTuple: index set not sorted");
    for (int i : *set) {
      if (i < 0 || i >= s) throw DomainError("IndexTuple: index out of range");
      if (seen[static_cast<std::size_t>(i)]++) throw DomainError("IndexTuple: I1 and I2 must be disjoint");
    }
  }
  for (int i = 0; i < s; ++i) {
    const int ti = t.tau[static_cast<std::size_t>(i)];
    if (ti < 0) throw DomainError("IndexTuple: tau must be non-negative");
    if (ti > 0 && !seen[static_cast<std::size_t>(i)]) {
      throw DomainError("IndexTuple: tau must vanish outside I1 and I2");
    }
  }
}

bool canonical_less(const IndexTuple& x, const IndexTuple& y) {
  const int wx = x.weight(), wy = y.weight();
  if (wx != wy) return wx < wy;
  if (x.I1 != y.I1) return x.I1 < y.I1;
  if (x.I2 != y.I2) return x.I2 < y.I2;
  return x.tau < y.tau;
}

std::string to_string(const IndexTuple& t) {
  std::ostringstream os;
  auto set = [&os](const std::vector<int>& v) {
    os << "{";
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k] + 1;
    os << "}";
  };
  os << "I1=";
  set(t.I1);
  os << ";I2=";
  set(t.I2);
  os << ";tau=(";
  for (std::size_t k = 0; k < t.tau.size(); ++k) os << (k ? "," : "") << t.tau[k];
  os << ")";
  return os.str();
}

IndexTuple make_tuple(int s, std::vector<int> I1, std::vector<int> I2, std::vector<int> tau) {
  IndexTuple t{std::move(I1), std::move(I2), std::move(tau)};
  std::sort(t.I1.begin(), t.I1.end());
  std::sort(t.I2.begin(), t.I2.end());
  if (t.tau.empty()) t.tau.assign(static_cast<std::size_t>(s), 0);
  validate(t, s);
  return t;
}

std::vector<double> Box::a_double() const {
  std::vector<double> out;
  for (const auto& v : a) out.push_back(v.get_d());
  return out;
}

std::vector<double> Box::b_double() const {
  std::vector<double> out;
  for (const auto& v : b) out.push_back(v.get_d());
  return out;
}

void validate(const Box& box) {
  if (box.a.size() != box.b.size()) throw DomainError("Box: a and b have different lengths");
  if (box.a.empty()) throw DomainError("Box: dimension must be positive");
  for (std::size_t i = 0; i < box.a.size(); ++i) {
    if (!(box.a[i] < box.b[i])) {
      throw DomainError("Box: a[" + std::to_string(i) + "] must be smaller than b[" + std::to_string(i) + "]");
    }
  }
}

Box unit_box(int s) {
  return Box{std::vector<Rational>(static_cast<std::size_t>(s), Rational(0)),
             std::vector<Rational>(static_cast<std::size_t>(s), Rational(1))};
}

Box symmetric_box(int s) {
  return Box{std::vector<Rational>(static_cast<std::size_t>(s), Rational(-1)),
             std::vector<Rational>(static_cast<std::size_t>(s), Rational(1))};
}

namespace {

void generate(int s, int K, int i, std::vector<int>& role, std::vector<int>& tau, int weight,
              std::vector<IndexTuple>& out) {
  if (i == s) {
    IndexTuple t;
    t.tau = tau;
    for (int j = 0; j < s; ++j) {
      if (role[static_cast<std::size_t>(j)] == 1) t.I1.push_back(j);
      if (role[static_cast<std::size_t>(j)] == 2) t.I2.push_back(j);
    }
    out.push_back(std::move(t));
    return;
  }
  role[static_cast<std::size_t>(i)] = 0;
  tau[static_cast<std::size_t>(i)] = 0;
  generate(s, K, i + 1, role, tau, weight, out);
  for (int r = 1; r <= 2; ++r) {
    for (int k = 0; weight + 1 + k < K; ++k) {
      role[static_cast<std::size_t>(i)] = r;
      tau[static_cast<std::size_t>(i)] = k;
      generate(s, K, i + 1, role, tau, weight + 1 + k, out);
    }
  }
  role[static_cast<std::size_t>(i)] = 0;
  tau[static_cast<std::size_t>(i)] = 0;
}

}  // namespace

std::vector<IndexTuple> enumerate_index_set(int s, int K) {
  if (s < 1) throw DomainError("enumerate_index_set: s must be at least 1");
  if (K < 1) throw DomainError("enumerate_index_set: K must be at least 1");
  std::vector<IndexTuple> out;
  std::vector<int> role(static_cast<std::size_t>(s), 0), tau(static_cast<std::size_t>(s), 0);
  generate(s, K, 0, role, tau, 0, out);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<double> sigma_select(std::span<const double> x, const Box& box, const IndexTuple& t) {
  if (static_cast<int>(x.size()) != box.s() || t.s() != box.s()) {
    throw DomainError("sigma_select: dimension mismatch");
  }
  std::vector<double> out(x.begin(), x.end());
  for (int i : t.I1) out[static_cast<std::size_t>(i)] = box.b[static_cast<std::size_t>(i)].get_d();
  for (int i : t.I2) out[static_cast<std::size_t>(i)] = box.a[static_cast<std::size_t>(i)].get_d();
  return out;
}

IndexTuple dual_tuple(const IndexTuple& t) { return IndexTuple{t.I2, t.I1, t.tau}; }

}  // namespace circlekit
