#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lssot/circle.hpp"
#include "lssot/slicer.hpp"
#include "lssot/sphere_stats.hpp"

using namespace lssot;

namespace {

SphericalPointCloud random_cloud(std::uint64_t seed, std::size_t n, std::uint32_t d) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> pts(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    double nn = 0.0;
    for (std::uint32_t c = 0; c < d; ++c) {
      pts[i * d + c] = normal(gen);
      nn += pts[i * d + c] * pts[i * d + c];
    }
    nn = std::sqrt(nn);
    for (std::uint32_t c = 0; c < d; ++c) pts[i * d + c] /= nn;
  }
  return make_cloud(pts, d);
}

double frame_orthonormality_defect(const SliceSet& s, std::size_t l) {
  const double* u1 = s.u1(l);
  const double* u2 = s.u2(l);
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  for (std::uint32_t i = 0; i < s.d; ++i) {
    g11 += u1[i] * u1[i];
    g12 += u1[i] * u2[i];
    g22 += u2[i] * u2[i];
  }
  return std::max({std::abs(g11 - 1.0), std::abs(g12), std::abs(g22 - 1.0)});
}

}  // namespace

TEST_CASE("sample_slices is deterministic and orthonormal") {
  const SliceSet a = sample_slices(7, 3, 3);
  const SliceSet b = sample_slices(7, 3, 3);
  CHECK(a.frames == b.frames);  // bit-for-bit

  for (std::uint32_t d : {2u, 3u, 5u, 16u}) {
    const SliceSet s = sample_slices(42, 50, d);
    for (std::size_t l = 0; l < s.L; ++l) CHECK(frame_orthonormality_defect(s, l) <= 1e-10);
  }
  CHECK_THROWS_AS(sample_slices(1, 0, 3), error);
  CHECK_THROWS_AS(sample_slices(1, 4, 1), error);
}

TEST_CASE("d=2 frames are orthogonal 2x2 matrices") {
  const SliceSet s = sample_slices(3, 20, 2);
  for (std::size_t l = 0; l < s.L; ++l) {
    CHECK(frame_orthonormality_defect(s, l) <= 1e-10);
    const double det = s.u1(l)[0] * s.u2(l)[1] - s.u1(l)[1] * s.u2(l)[0];
    CHECK(std::abs(std::abs(det) - 1.0) <= 1e-10);
  }
}

TEST_CASE("project maps axis points to expected angles") {
  // frame = first two coordinate axes of R^3
  SliceSet s;
  s.L = 1;
  s.d = 3;
  s.frames = {1, 0, 0, 0, 1, 0};
  const SphericalPointCloud e1 = make_cloud({1, 0, 0}, 3);
  const ProjectedSlice p = project(s, 0, e1, 1e-6);
  REQUIRE(p.angles.size() == 1);
  CHECK(p.angles[0] == 0.0);

  const SphericalPointCloud pole = make_cloud({0, 0, 1}, 3);
  CHECK_THROWS_AS(project(s, 0, pole, 1e-6), error);
}

TEST_CASE("eps-cap redistributes mass equally") {
  SliceSet s;
  s.L = 1;
  s.d = 3;
  s.frames = {1, 0, 0, 0, 1, 0};
  const SphericalPointCloud cloud =
      make_cloud({0, 0, 1, 1, 0, 0, 0, 1, 0}, 3, {0.4, 0.3, 0.3});
  const ProjectedSlice p = project(s, 0, cloud, 1e-6);
  REQUIRE(p.capped_indices.size() == 1);
  CHECK(p.capped_indices[0] == 0);
  REQUIRE(p.weights.size() == 2);
  CHECK(p.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("projection idempotence on the slice circle") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const SliceSet s = sample_slices(9, 10, 4);
  for (std::size_t l = 0; l < s.L; ++l) {
    std::vector<double> pts;
    std::vector<double> expected;
    for (int k = 0; k < 8; ++k) {
      const double a = unif(gen);
      const double c = std::cos(2 * M_PI * a), sn = std::sin(2 * M_PI * a);
      for (std::uint32_t i = 0; i < s.d; ++i)
        pts.push_back(c * s.u1(l)[i] + sn * s.u2(l)[i]);
      expected.push_back(a);
    }
    const ProjectedSlice p = project(s, l, make_cloud(pts, s.d), 1e-6);
    REQUIRE(p.angles.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k)
      CHECK(circ_abs(p.angles[k] - expected[k]) <= 1e-12);
  }
}

TEST_CASE("rotation covariance of projections") {
  for (std::uint32_t d : {3u, 4u}) {
    const SphericalPointCloud cloud = random_cloud(31, 40, d);
    const std::vector<double> R = random_rotation(77, d);
    const SphericalPointCloud rotated = rotate_cloud(cloud, R);
    const SliceSet s = sample_slices(15, 12, d);
    for (std::size_t l = 0; l < s.L; ++l) {
      // Rt U frame
      std::vector<double> ru1(d), ru2(d);
      for (std::uint32_t i = 0; i < d; ++i) {
        double a1 = 0.0, a2 = 0.0;
        for (std::uint32_t r = 0; r < d; ++r) {
          a1 += R[r * d + i] * s.u1(l)[r];
          a2 += R[r * d + i] * s.u2(l)[r];
        }
        ru1[i] = a1;
        ru2[i] = a2;
      }
      const ProjectedSlice a = project(s.u1(l), s.u2(l), rotated, 1e-6);
      const ProjectedSlice b = project(ru1.data(), ru2.data(), cloud, 1e-6);
      REQUIRE(a.angles.size() == b.angles.size());
      for (std::size_t k = 0; k < a.angles.size(); ++k)
        CHECK(circ_abs(a.angles[k] - b.angles[k]) <= 1e-12);
    }
  }
}

TEST_CASE("weight conservation for any capped subset") {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const SliceSet s = sample_slices(55, 30, 3);
  for (std::size_t l = 0; l < s.L; ++l) {
    // points clustered near the slice poles force frequent capping
    std::vector<double> pts;
    std::vector<double> w;
    for (int k = 0; k < 20; ++k) {
      double p[3];
      const double* u1 = s.u1(l);
      const double* u2 = s.u2(l);
      double n1[3];
      // a vector orthogonal to the slice plane (d=3: cross product)
      n1[0] = u1[1] * u2[2] - u1[2] * u2[1];
      n1[1] = u1[2] * u2[0] - u1[0] * u2[2];
      n1[2] = u1[0] * u2[1] - u1[1] * u2[0];
      const double t = unif(gen) * 0.3;
      const double a = unif(gen);
      for (int i = 0; i < 3; ++i)
        p[i] = std::sqrt(1 - t * t) * n1[i] +
               t * (std::cos(2 * M_PI * a) * u1[i] + std::sin(2 * M_PI * a) * u2[i]);
      double nn = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      for (int i = 0; i < 3; ++i) pts.push_back(p[i] / nn);
      w.push_back(0.1 + unif(gen));
    }
    try {
      const ProjectedSlice ps = project(s, l, make_cloud(pts, 3, w), 0.2);
      double total = 0.0;
      for (double ww : ps.weights) total += ww;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    } catch (const error& e) {
      CHECK(e.code() == errc::all_points_capped);
    }
  }
}

TEST_CASE("empirical Stiefel uniformity of slice normals in d=3") {
  const std::size_t L = 100000;
  const SliceSet s = sample_slices(123, L, 3);
  std::array<std::size_t, 8> oct{};
  for (std::size_t l = 0; l < L; ++l) {
    const double* u1 = s.u1(l);
    const double* u2 = s.u2(l);
    double n[3] = {u1[1] * u2[2] - u1[2] * u2[1], u1[2] * u2[0] - u1[0] * u2[2],
                   u1[0] * u2[1] - u1[1] * u2[0]};
    const int idx = (n[0] > 0 ? 1 : 0) + (n[1] > 0 ? 2 : 0) + (n[2] > 0 ? 4 : 0);
    ++oct[idx];
  }
  for (std::size_t c : oct) {
    const double frac = static_cast<double>(c) / static_cast<double>(L);
    CHECK(frac >= 0.12);
    CHECK(frac <= 0.13);
  }
}

TEST_CASE("slice streams are independent of generation order") {
  const SliceSet all = sample_slices(99, 64, 3);
  // regenerating any single slice index reproduces the same frame
  for (std::size_t l : {0ul, 7ul, 63ul}) {
    std::mt19937_64 gen(slice_stream_seed(99, l));
    std::normal_distribution<double> normal(0.0, 1.0);
    double z[6];
    for (int i = 0; i < 6; ++i) z[i] = normal(gen);
    // first Gram-Schmidt column matches u1 direction
    double nn = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    for (int i = 0; i < 3; ++i) CHECK(all.u1(l)[i] == doctest::Approx(z[i] / nn).epsilon(1e-12));
  }
}
