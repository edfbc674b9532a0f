#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>
#include <vector>

#include "circlekit/kernels.hpp"

using namespace circlekit;

namespace {

std::vector<double> random_thetas(std::mt19937_64& rng, std::size_t n, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<double> out(n);
  for (auto& t : out) t = u(rng);
  return out;
}

std::int64_t naive_count(const std::vector<double>& c, double x0, std::int64_t len, double target) {
  std::int64_t hits = 0;
  for (std::int64_t k = 0; k < len; ++k) {
    const double t = x0 + static_cast<double>(k);
    double v = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) v = v * t + c[j];
    hits += v == target ? 1 : 0;
  }
  return hits;
}

}  // namespace

TEST_CASE("scalar expi is accurate") {
  const auto& ops = kernels::scalar_ops();
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 7u, 64u, 1001u}) {
    const auto th = random_thetas(rng, n, 1e4);
    std::vector<double> re(n), im(n);
    ops.expi(th.data(), re.data(), im.data(), n);
    for (std::size_t k = 0; k < n; ++k) {
      const double r = th[k] - std::nearbyint(th[k]);
      CHECK(std::abs(re[k] - std::cos(2 * M_PI * r)) < 1e-15);
      CHECK(std::abs(im[k] - std::sin(2 * M_PI * r)) < 1e-15);
    }
  }
}

TEST_CASE("vector kernels agree with the scalar reference") {
  const kernels::Ops* v = kernels::avx2_ops();
  if (v == nullptr) {
    MESSAGE("AVX2 variant unavailable on this machine");
    return;
  }
  const auto& s = kernels::scalar_ops();
  std::mt19937_64 rng(11);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 2048u, 4099u}) {
    for (double spread : {0.5, 1e3, 1e7}) {
      const auto th = random_thetas(rng, n, spread);
      const auto wr = random_thetas(rng, n, 1.0);
      const auto wi = random_thetas(rng, n, 1.0);
      std::vector<double> r1(n), i1(n), r2(n), i2(n);
      s.expi(th.data(), r1.data(), i1.data(), n);
      v->expi(th.data(), r2.data(), i2.data(), n);
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(std::abs(r1[k] - r2[k]) < 4e-15);
        CHECK(std::abs(i1[k] - i2[k]) < 4e-15);
      }
      const auto a = s.weighted_expi_sum(th.data(), wr.data(), wi.data(), n);
      const auto b = v->weighted_expi_sum(th.data(), wr.data(), wi.data(), n);
      CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, static_cast<double>(n)));
    }
  }
}

TEST_CASE("polynomial row counting is exact in every variant") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-6, 6);
  std::vector<const kernels::Ops*> variants{&kernels::scalar_ops()};
  if (kernels::avx2_ops() != nullptr) variants.push_back(kernels::avx2_ops());
  for (int trial = 0; trial < 200; ++trial) {
    const int degree = 1 + trial % 4;
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    for (auto& x : c) x = coef(rng);
    if (c.back() == 0.0) c.back() = 1.0;
    const double x0 = -40.0 + trial % 13;
    const std::int64_t len = 1 + trial % 90;
    const double t = x0 + static_cast<double>(trial % static_cast<int>(len));
    double target = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) target = target * t + c[j];
    const auto expected = naive_count(c, x0, len, target);
    CHECK(expected >= 1);
    for (const auto* ops : variants) CHECK(ops->count_poly_row(c.data(), degree, x0, len, target) == expected);
  }
}

TEST_CASE("runtime dispatch honours the environment override") {
  const auto& active = kernels::active_ops();
  const char* isa = std::getenv("CIRCLEKIT_ISA");
  if (isa != nullptr && std::strcmp(isa, "scalar") == 0) {
    CHECK(&active == &kernels::scalar_ops());
  } else if (kernels::avx2_ops() != nullptr) {
    CHECK(&active == kernels::avx2_ops());
  } else {
    CHECK(&active == &kernels::scalar_ops());
  }
}
