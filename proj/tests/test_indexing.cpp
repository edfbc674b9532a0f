#include <doctest.h>

#include <algorithm>
#include <set>

#include "circlekit/errors.hpp"
#include "circlekit/indexing.hpp"

using namespace circlekit;

namespace {

// Independent generator: every (role, tau) assignment filtered by weight.
std::vector<IndexTuple> brute_force(int s, int K) {
  std::vector<IndexTuple> out;
  std::vector<int> roles(static_cast<std::size_t>(s), 0), tau(static_cast<std::size_t>(s), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == s) {
      IndexTuple t;
      t.tau = tau;
      for (int j = 0; j < s; ++j) {
        if (roles[static_cast<std::size_t>(j)] == 1) t.I1.push_back(j);
        if (roles[static_cast<std::size_t>(j)] == 2) t.I2.push_back(j);
      }
      if (t.weight() < K) out.push_back(t);
      return;
    }
    for (int r = 0; r < 3; ++r) {
      roles[static_cast<std::size_t>(i)] = r;
      for (int k = 0; k < (r == 0 ? 1 : K); ++k) {
        tau[static_cast<std::size_t>(i)] = k;
        rec(i + 1);
      }
      tau[static_cast<std::size_t>(i)] = 0;
    }
  };
  rec(0);
  return out;
}

}  // namespace

TEST_CASE("index set examples") {
  CHECK(enumerate_index_set(1, 1).size() == 1);
  CHECK(enumerate_index_set(3, 1) == std::vector<IndexTuple>{make_tuple(3, {}, {})});
  const auto s2 = enumerate_index_set(2, 2);
  REQUIRE(s2.size() == 5);
  CHECK(s2[0] == make_tuple(2, {}, {}));
  for (std::size_t i = 1; i < s2.size(); ++i) {
    CHECK(s2[i].weight() == 1);
    CHECK(s2[i].tau_norm() == 0);
  }
  CHECK(enumerate_index_set(1, 2).size() == 3);
}

TEST_CASE("index set matches the brute-force generator") {
  for (int s = 1; s <= 4; ++s) {
    for (int K = 1; K <= 4; ++K) {
      auto fast = enumerate_index_set(s, K);
      auto slow = brute_force(s, K);
      std::sort(slow.begin(), slow.end(), canonical_less);
      CHECK(fast == slow);
      std::set<std::string> labels;
      for (const auto& t : fast) {
        CHECK_NOTHROW(validate(t, s));
        labels.insert(to_string(t));
      }
      CHECK(labels.size() == fast.size());
      CHECK(std::is_sorted(fast.begin(), fast.end(), canonical_less));
    }
  }
}

TEST_CASE("selector") {
  const Box box = unit_box(2);
  const std::vector<double> x{0.3, 0.7};
  CHECK(sigma_select(x, box, make_tuple(2, {}, {})) == x);
  CHECK(sigma_select(x, box, make_tuple(2, {0}, {})) == std::vector<double>{1.0, 0.7});
  CHECK(sigma_select(x, box, make_tuple(2, {}, {0, 1})) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("dual tuples") {
  CHECK(dual_tuple(make_tuple(2, {}, {})) == make_tuple(2, {}, {}));
  CHECK(dual_tuple(make_tuple(1, {0}, {})) == make_tuple(1, {}, {0}));
  CHECK(dual_tuple(make_tuple(2, {0}, {1}, {1, 0})) == make_tuple(2, {1}, {0}, {1, 0}));
  for (const auto& t : enumerate_index_set(3, 4)) {
    CHECK(dual_tuple(dual_tuple(t)) == t);
    CHECK(dual_tuple(t).weight() == t.weight());
  }
}

TEST_CASE("tuple rendering and validation") {
  CHECK(to_string(make_tuple(3, {0}, {2}, {1, 0, 0})) == "I1={1};I2={3};tau=(1,0,0)");
  CHECK(to_string(make_tuple(2, {}, {})) == "I1={};I2={};tau=(0,0)");
  CHECK_THROWS_AS(make_tuple(2, {0}, {0}), DomainError);
  CHECK_THROWS_AS(make_tuple(2, {}, {}, {1, 0}), DomainError);
  CHECK_THROWS_AS(make_tuple(2, {2}, {}), DomainError);
  CHECK(make_tuple(3, {0}, {1, 2}).I3().empty());
  CHECK(make_tuple(3, {1}, {}).I3() == std::vector<int>{0, 2});
}

TEST_CASE("box validation") {
  Box box{{Rational(0), Rational(1)}, {Rational(1), Rational(1)}};
  CHECK_THROWS_WITH_AS(validate(box), doctest::Contains("a[1] must be smaller than b[1]"), DomainError);
  CHECK_NOTHROW(validate(symmetric_box(3)));
}
