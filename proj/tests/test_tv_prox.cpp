#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "cscpct/tv_prox.hpp"
#include "cscpct/types.hpp"
#include "oracles.hpp"

using namespace cscpct;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("constant target is a fixed point") {
  const std::vector<double> c(17, -3.25);
  for (double w : {0.0, 0.1, 5.0, 1e6})
    for (double x : prox_tv(c, w)) CHECK(std::abs(x + 3.25) <= 1e-14 * (1.0 + w));
}

TEST_CASE("zero weight returns the target") {
  std::mt19937_64 rng(1);
  const auto v = oracle::random_vector(rng, 40);
  CHECK(prox_tv(v, 0.0) == v);
}

TEST_CASE("single sample is returned unchanged") {
  CHECK(prox_tv(std::vector<double>{4.0}, 10.0) == std::vector<double>{4.0});
}

TEST_CASE("step example against the QP oracle") {
  const std::vector<double> v{0.0, 0.0, 1.0, 1.0};
  const auto u = prox_tv(v, 0.25);
  const auto ref = oracle::tv_dual_qp(v, 0.25);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(u[i] - ref.u[i]) <= 1e-6);
  // Each half moves 0.25 / 2 towards the other.
  CHECK(u[0] == doctest::Approx(0.125));
  CHECK(u[3] == doctest::Approx(0.875));
}

TEST_CASE("large weight gives the mean") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const auto v = oracle::random_vector(rng, 3 + rep, -5.0, 5.0);
    const double m = mean(v);
    double bound = 0.0;
    for (double x : v) bound += std::abs(x - m);
    const auto u = prox_tv(v, bound);
    for (double x : u) CHECK(std::abs(x - m) <= 1e-10);
    const auto ref = oracle::tv_dual_qp(v, bound);
    for (double x : ref.u) CHECK(std::abs(x - m) <= 1e-6);
  }
}

TEST_CASE("mean preservation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> weight(0.01, 10.0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto v = oracle::random_vector(rng, 50, -10.0, 10.0);
    CHECK(std::abs(mean(prox_tv(v, weight(rng))) - mean(v)) <= 1e-10);
  }
}

TEST_CASE("optimality certificate") {
  // v - u = D^T s with |s| <= w, and |s| = w wherever u jumps.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> weight(0.01, 10.0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto v = oracle::random_vector(rng, 40, -3.0, 3.0);
    const double w = weight(rng);
    const auto u = prox_tv(v, w);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      s += v[i] - u[i];
      CHECK(std::abs(s) <= w + 1e-9);
      if (u[i + 1] > u[i]) CHECK(s == doctest::Approx(-w).epsilon(1e-9));
      if (u[i + 1] < u[i]) CHECK(s == doctest::Approx(w).epsilon(1e-9));
    }
    CHECK(std::abs(s + v.back() - u.back()) <= 1e-9);
  }
}

TEST_CASE("nonexpansive") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> weight(0.01, 10.0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto a = oracle::random_vector(rng, 30, -5.0, 5.0);
    const auto b = oracle::random_vector(rng, 30, -5.0, 5.0);
    const double w = weight(rng);
    CHECK(dist(prox_tv(a, w), prox_tv(b, w)) <= dist(a, b) + 1e-12);
  }
}

TEST_CASE("matches the QP oracle objective on random instances") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> len(2, 50);
  std::uniform_real_distribution<double> log_w(std::log(0.01), std::log(10.0));
  for (int rep = 0; rep < 200; ++rep) {
    const auto v = oracle::random_vector(rng, len(rng), -5.0, 5.0);
    const double w = std::exp(log_w(rng));
    const auto u = prox_tv(v, w);
    const auto ref = oracle::tv_dual_qp(v, w);
    const double ours = oracle::tv_primal(u, v, w);
    // The dual value certifies a lower bound on the optimum.
    CHECK(ours >= ref.dual - 1e-9);
    CHECK(std::abs(ours - ref.primal) <= 1e-6);
    CHECK(tv_objective(u, v, w) == doctest::Approx(ours).epsilon(1e-12));
  }
}

TEST_CASE("in-place and span overload agree") {
  std::mt19937_64 rng(7);
  auto v = oracle::random_vector(rng, 25);
  const auto u = prox_tv(v, 0.3);
  std::vector<double> out(v.size());
  prox_tv(v, 0.3, out);
  CHECK(out == u);
  prox_tv(v, 0.3, v);
  CHECK(v == u);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(prox_tv(std::vector<double>{}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(prox_tv(std::vector<double>{1.0, std::nan("")}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(prox_tv(std::vector<double>{1.0, 2.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(prox_tv(std::vector<double>{1.0, 2.0}, std::nan("")), std::invalid_argument);
  std::vector<double> out(3);
  CHECK_THROWS_AS(prox_tv(std::vector<double>{1.0, 2.0}, 1.0, out), std::invalid_argument);
}
