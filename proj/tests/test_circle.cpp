#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lssot/circle.hpp"
#include "lssot/oracle.hpp"

using namespace lssot;

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

TEST_CASE("from_points merges, reduces and normalizes") {
  const CircularMeasure merged = from_points({0.25, 0.25}, {{1.0, 3.0}});
  CHECK(merged.size() == 1);
  CHECK(merged.angles[0] == doctest::Approx(0.25));
  CHECK(merged.weights[0] == doctest::Approx(1.0));

  const CircularMeasure reduced = from_points({1.5, -0.25});
  CHECK(reduced.size() == 2);
  CHECK(reduced.angles[0] == doctest::Approx(0.5));
  CHECK(reduced.angles[1] == doctest::Approx(0.75));
  CHECK(reduced.weights[0] == doctest::Approx(0.5));

  const CircularMeasure norm = from_points({0.1, 0.6}, {{2.0, 2.0}});
  CHECK(norm.weights[0] == doctest::Approx(0.5));
  CHECK(norm.weights[1] == doctest::Approx(0.5));
  CHECK(norm.cum_weights.back() == 1.0);

  CHECK_THROWS_AS(from_points({0.1}, {{-1.0}}), error);
  CHECK_THROWS_AS(from_points({}, std::nullopt), error);
  CHECK_THROWS_AS(from_points({0.1, 0.2}, {{0.0, 0.0}}), error);
}

TEST_CASE("cdf is the left-open mass below") {
  const CircularMeasure m = from_points({0.1, 0.6}, {{0.5, 0.5}});
  CHECK(cdf(m, 0.05) == 0.0);
  CHECK(cdf(m, 0.3) == 0.5);
  CHECK(cdf(m, 0.1) == 0.0);
  CHECK(cdf(m, 0.6) == 0.5);
  CHECK(cdf(m, 0.99) == 1.0);
}

TEST_CASE("quantile basics and periodic extension") {
  const CircularMeasure m = from_points({0.1, 0.6}, {{0.5, 0.5}});
  CHECK(quantile(m, 0.25) == 0.1);
  CHECK(quantile(m, 0.75) == 0.6);
  CHECK(quantile(m, 1.25) == doctest::Approx(1.1).epsilon(0.0));

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const CircularMeasure r = random_measure(gen);
  for (int t = 0; t < 100; ++t) {
    const double s = unif(gen);
    for (int n = -2; n <= 2; ++n) {
      CHECK(quantile(r, s + n) == quantile(r, s) + n);
    }
  }
}

TEST_CASE("quantile/cdf consistency on atom plateaus") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const CircularMeasure m = random_measure(gen);
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double lo = i == 0 ? 0.0 : m.cum_weights[i - 1];
      const double hi = m.cum_weights[i];
      for (double f : {0.1, 0.5, 0.9}) {
        const double s = lo + f * (hi - lo);
        if (s <= lo || s >= hi) continue;
        CHECK(quantile(m, s) == m.angles[i]);
      }
    }
  }
}

TEST_CASE("mean_angle and optimal_shift") {
  CHECK(mean_angle(from_points({0.3})) == doctest::Approx(0.3));
  CHECK(mean_angle(from_points({0.0, 0.5})) == doctest::Approx(0.25));
  CHECK(mean_angle(from_points({0.1, 0.2, 0.6}, {{0.25, 0.25, 0.5}})) ==
        doctest::Approx(0.375));

  CHECK(optimal_shift(from_points({0.3})) == doctest::Approx(-0.2));
  CHECK(optimal_shift(from_points({0.5})) == doctest::Approx(0.0));
}

TEST_CASE("optimal_shift matches the brute-force argmin") {
  // alpha-grid exhaustive search against the aligned uniform reference
  std::mt19937_64 gen(13);
  oracle::OracleConfig cfg;
  cfg.alpha_grid = 10000;
  cfg.dense_M = 20000;
  const CircularMeasure uni = uniform_grid(cfg.dense_M);
  for (int t = 0; t < 10; ++t) {
    const CircularMeasure m = random_measure(gen);
    const auto res = oracle::cot_bruteforce(uni, m, cfg);
    CHECK(std::abs(res.alpha - optimal_shift(m)) <=
          1.0 / static_cast<double>(cfg.alpha_grid));
  }
}

TEST_CASE("lcot_embed: uniform grid maps to itself") {
  for (int M : {4, 64, 257}) {
    const CircularDisplacement d = lcot_embed(uniform_grid(M), M);
    for (double v : d.values) CHECK(circ_abs(v) <= 1e-12);
  }
}

TEST_CASE("lcot_embed: dirac closed form") {
  const CircularDisplacement d = lcot_embed(from_points({0.0}), 4);
  REQUIRE(d.values.size() == 4);
  CHECK(d.values[0] == doctest::Approx(-0.125));
  CHECK(d.values[1] == doctest::Approx(-0.375));
  CHECK(d.values[2] == doctest::Approx(0.375));
  CHECK(d.values[3] == doctest::Approx(0.125));

  // circular abs of a dirac displacement equals the circular distance to t
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const double at = unif(gen);
    const int M = 199;
    const CircularDisplacement e = lcot_embed(from_points({at}), M);
    for (int k = 0; k < M; ++k) {
      const double x = (k + 0.5) / M;
      CHECK(circ_abs(e.values[k]) == doctest::Approx(circ_abs(x - at)).epsilon(1e-12));
    }
  }
}

TEST_CASE("lcot_distance: diracs and identity") {
  const int M = 1000;
  const auto e0 = lcot_embed(from_points({0.0}), M);
  const auto e25 = lcot_embed(from_points({0.25}), M);
  const auto e5 = lcot_embed(from_points({0.5}), M);
  CHECK(lcot_distance(e0, e0) == 0.0);
  CHECK(std::abs(lcot_distance(e0, e25) - 0.25) <= 2.0 / M);
  CHECK(std::abs(lcot_distance(e0, e5) - 0.5) <= 2.0 / M);
  CHECK_THROWS_AS(lcot_distance(e0, lcot_embed(from_points({0.0}), 999)), error);
}

TEST_CASE("lcot_distance is a metric on fixed-M embeddings") {
  std::mt19937_64 gen(19);
  const int M = 256;
  for (int t = 0; t < 100; ++t) {
    const auto a = lcot_embed(random_measure(gen), M);
    const auto b = lcot_embed(random_measure(gen), M);
    const auto c = lcot_embed(random_measure(gen), M);
    const double ab = lcot_distance(a, b);
    const double ba = lcot_distance(b, a);
    const double ac = lcot_distance(a, c);
    const double cb = lcot_distance(c, b);
    CHECK(ab >= 0.0);
    CHECK(ab == ba);  // bit-for-bit
    CHECK(ab <= ac + cb + 1e-12);
  }
}

TEST_CASE("distance to the uniform reference equals the embedding norm") {
  std::mt19937_64 gen(23);
  const int M = 512;
  const auto eu = lcot_embed(uniform_grid(M), M);
  for (int t = 0; t < 10; ++t) {
    const auto m = random_measure(gen);
    const auto e = lcot_embed(m, M);
    double acc = 0.0;
    for (double v : e.values) acc += circ_abs(v) * circ_abs(v);
    CHECK(lcot_distance(e, eu) == doctest::Approx(std::sqrt(acc / M)).epsilon(1e-12));
  }
}

TEST_CASE("circ_abs properties") {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  for (int t = 0; t < 1000; ++t) {
    const double r = unif(gen);
    CHECK(circ_abs(r) >= 0.0);
    CHECK(circ_abs(r) <= 0.5);
    CHECK(circ_abs(r) == circ_abs(-r));
    for (int n = -2; n <= 2; ++n)
      CHECK(circ_abs(r + n) == doctest::Approx(circ_abs(r)).epsilon(1e-12));
  }
}

TEST_CASE("cot_shift_cost examples") {
  const CircularMeasure uni = uniform_grid(1000);
  CHECK(cot_shift_cost(uni, uni, 0.0, 1000) == 0.0);

  // dirac target: optimal shift alpha = t - 1/2 attains the minimum cost
  const CircularMeasure dirac = from_points({0.3});
  const double at_opt = cot_shift_cost(uni, dirac, -0.2, 5000);
  for (double alpha : {-0.45, -0.3, -0.1, 0.2, 0.42}) {
    CHECK(at_opt <= cot_shift_cost(uni, dirac, alpha, 5000) + 1e-12);
  }

  // diracs at 0.0, 0.25: best grid alpha gives the squared circular distance
  const CircularMeasure d0 = from_points({0.0});
  const CircularMeasure d25 = from_points({0.25});
  double best = 1e18;
  const int A = 400;
  for (int j = 0; j < A; ++j) best = std::min(best, cot_shift_cost(d0, d25, -0.5 + 1.0 * j / A, 500));
  CHECK(best == doctest::Approx(0.0625).epsilon(1e-9));
}
