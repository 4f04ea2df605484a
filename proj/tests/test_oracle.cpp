#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lssot/circle.hpp"
#include "lssot/embedding.hpp"
#include "lssot/oracle.hpp"

using namespace lssot;
using oracle::OracleConfig;

namespace {

CircularMeasure random_measure(std::mt19937_64& gen, int max_atoms = 20) {
  std::uniform_int_distribution<int> nd(1, max_atoms);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = nd(gen);
  std::vector<double> a(n), w(n);
  for (int i = 0; i < n; ++i) {
    a[i] = unif(gen);
    w[i] = 0.05 + unif(gen);
  }
  return from_points(a, w);
}

}  // namespace

TEST_CASE("cot_bruteforce: self distance is zero") {
  std::mt19937_64 gen(3);
  OracleConfig cfg;
  cfg.alpha_grid = 1000;
  cfg.dense_M = 4000;
  const CircularMeasure m = random_measure(gen);
  const auto res = oracle::cot_bruteforce(m, m, cfg);
  CHECK(res.cost <= 1e-9);
}

TEST_CASE("cot_bruteforce: uniform to dirac recovers the antipodal shift") {
  OracleConfig cfg;  // alpha_grid 1e4, dense 1e5
  const auto res = oracle::cot_bruteforce(uniform_grid(1000), from_points({0.3}), cfg);
  CHECK(std::abs(res.alpha - (-0.2)) <= 1.0 / cfg.alpha_grid);
}

TEST_CASE("cot_bruteforce: diracs at 0 and 0.25") {
  OracleConfig cfg;
  cfg.alpha_grid = 2000;
  cfg.dense_M = 8000;
  const auto res = oracle::cot_bruteforce(from_points({0.0}), from_points({0.25}), cfg);
  CHECK(std::abs(res.cost - 0.0625) <= 2.0 / cfg.alpha_grid);
}

TEST_CASE("cot_bruteforce sweep equals literal cot_shift_cost evaluations") {
  std::mt19937_64 gen(5);
  OracleConfig cfg;
  cfg.alpha_grid = 200;
  cfg.dense_M = 400;
  const CircularMeasure m1 = random_measure(gen, 8);
  const CircularMeasure m2 = random_measure(gen, 8);
  const auto res = oracle::cot_bruteforce(m1, m2, cfg);
  double best = 1e18;
  double best_alpha = 0.0;
  for (int j = 0; j < cfg.alpha_grid; ++j) {
    const double alpha = -0.5 + static_cast<double>(j) / cfg.alpha_grid;
    const double c = cot_shift_cost(m1, m2, alpha, 400);
    if (c < best) {
      best = c;
      best_alpha = alpha;
    }
  }
  CHECK(res.cost == doctest::Approx(best).epsilon(1e-12));
  CHECK(res.alpha == doctest::Approx(best_alpha).epsilon(1e-12));
}

TEST_CASE("cot_bruteforce cost is invariant under joint rotation") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  OracleConfig cfg;
  cfg.alpha_grid = 100000;
  cfg.dense_M = 100000;
  for (int t = 0; t < 3; ++t) {
    const CircularMeasure m1 = random_measure(gen, 10);
    const CircularMeasure m2 = random_measure(gen, 10);
    const double beta = unif(gen);
    std::vector<double> a1, a2;
    for (double a : m1.angles) a1.push_back(a + beta);
    for (double a : m2.angles) a2.push_back(a + beta);
    const CircularMeasure r1 = from_points(a1, m1.weights);
    const CircularMeasure r2 = from_points(a2, m2.weights);
    const double c0 = oracle::cot_bruteforce(m1, m2, cfg).cost;
    const double c1 = oracle::cot_bruteforce(r1, r2, cfg).cost;
    CHECK(std::abs(c0 - c1) <= 1e-9);
  }
}

TEST_CASE("lcot_dense: downsampled dense embedding matches lcot_embed") {
  std::mt19937_64 gen(11);
  OracleConfig cfg;
  cfg.dense_M = 102400;  // 100 dense cells per coarse cell
  const int M = 1024;
  for (int t = 0; t < 5; ++t) {
    const CircularMeasure m = random_measure(gen);
    const CircularDisplacement dense = oracle::lcot_dense(m, cfg);
    const CircularDisplacement coarse = lcot_embed(m, M);
    const std::int64_t r = cfg.dense_M / M;
    for (int k = 0; k < M; ++k) {
      // nearest dense grid point to the coarse midpoint
      const double dv = dense.values[k * r + r / 2];
      const double xd = (static_cast<double>(k * r + r / 2) + 0.5) / cfg.dense_M;
      const double xc = (k + 0.5) / static_cast<double>(M);
      // compare the quantile values those displacements encode
      CHECK(circ_abs((dv + xd) - (coarse.values[k] + xc)) <= 1.0 / M);
    }
  }
}

TEST_CASE("lcot_dense: dirac closed form and uniform grid") {
  OracleConfig cfg;
  cfg.dense_M = 20000;
  const double t = 0.37;
  const CircularDisplacement d = oracle::lcot_dense(from_points({t}), cfg);
  for (std::int64_t k = 0; k < cfg.dense_M; k += 97) {
    const double x = (static_cast<double>(k) + 0.5) / cfg.dense_M;
    CHECK(circ_abs(d.values[k]) == doctest::Approx(circ_abs(x - t)).epsilon(1e-12));
  }
  const CircularDisplacement u = oracle::lcot_dense(uniform_grid(cfg.dense_M), cfg);
  for (std::int64_t k = 0; k < cfg.dense_M; k += 101)
    CHECK(circ_abs(u.values[k]) <= 1.0 / cfg.dense_M);
}

TEST_CASE("lcot_dense converges in the distance-to-uniform norm") {
  std::mt19937_64 gen(13);
  const CircularMeasure m = random_measure(gen);
  auto norm_at = [&](std::int64_t G) {
    OracleConfig cfg;
    cfg.dense_M = G;
    const CircularDisplacement d = oracle::lcot_dense(m, cfg);
    double acc = 0.0;
    for (double v : d.values) acc += circ_abs(v) * circ_abs(v);
    return std::sqrt(acc / static_cast<double>(G));
  };
  const double a = norm_at(50000);
  const double b = norm_at(25000);
  CHECK(std::abs(a - b) <= 2.0 / 25000.0);
}

TEST_CASE("finite_diff_grad: constant loss gives zero gradient") {
  const SphericalPointCloud cloud = make_cloud({1, 0, 0, 0, 1, 0}, 3);
  OracleConfig cfg;
  const auto g = oracle::finite_diff_grad([](const SphericalPointCloud&) { return 2.5; },
                                          cloud, cfg);
  for (double v : g) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("finite_diff_grad output is tangential") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> pts(5 * 3);
  for (auto& v : pts) v = normal(gen);
  for (int i = 0; i < 5; ++i) {
    double nn = 0.0;
    for (int c = 0; c < 3; ++c) nn += pts[i * 3 + c] * pts[i * 3 + c];
    nn = std::sqrt(nn);
    for (int c = 0; c < 3; ++c) pts[i * 3 + c] /= nn;
  }
  const SphericalPointCloud cloud = make_cloud(pts, 3);
  OracleConfig cfg;
  const auto g = oracle::finite_diff_grad(
      [](const SphericalPointCloud& c) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) s += c.point(i)[2] * c.point(i)[2];
        return s;
      },
      cloud, cfg);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double dp = 0.0;
    for (int c = 0; c < 3; ++c) dp += g[i * 3 + c] * cloud.point(i)[c];
    CHECK(std::abs(dp) <= 1e-10);
  }
}
