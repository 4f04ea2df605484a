#include "lssot/slicer.hpp"

#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lssot {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double dot(const double* a, const double* b, std::uint32_t d) {
  double s = 0.0;
  for (std::uint32_t i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

SphericalPointCloud make_cloud(const std::vector<double>& points, std::uint32_t d,
                               const std::vector<double>& weights, double norm_tol) {
  if (d < 2) raise(errc::bad_dimension, "cloud dimension must be >= 2");
  if (points.size() % d != 0) raise(errc::bad_config, "point buffer size not divisible by d");
  const std::size_t n = points.size() / d;
  if (n == 0) raise(errc::empty_measure, "cloud has no points");
  if (!weights.empty() && weights.size() != n)
    raise(errc::bad_config, "weights length does not match point count");

  SphericalPointCloud c;
  c.d = d;
  c.points = points;
  for (std::size_t i = 0; i < n; ++i) {
    double* p = c.point(i);
    double nrm = std::sqrt(dot(p, p, d));
    if (!std::isfinite(nrm)) raise(errc::not_finite, "non-finite point coordinate");
    if (std::abs(nrm - 1.0) > norm_tol)
      raise(errc::bad_config,
            "point " + std::to_string(i) + " has norm " + std::to_string(nrm));
    for (std::uint32_t k = 0; k < d; ++k) p[k] /= nrm;
  }

  double total = 0.0;
  if (weights.empty()) {
    c.weights.assign(n, 1.0 / static_cast<double>(n));
  } else {
    for (double w : weights) {
      if (!std::isfinite(w)) raise(errc::not_finite, "non-finite weight");
      if (w < 0.0) raise(errc::negative_weight, "negative weight");
      total += w;
    }
    if (total <= 0.0) raise(errc::empty_measure, "total weight is zero");
    c.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.weights[i] = weights[i] / total;
  }
  return c;
}

std::uint64_t slice_stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

SliceSet sample_slices(std::uint64_t seed, std::uint32_t L, std::uint32_t d) {
  if (d < 2 || L < 1) raise(errc::bad_dimension, "sample_slices needs L >= 1 and d >= 2");
  SliceSet s;
  s.seed = seed;
  s.L = L;
  s.d = d;
  s.frames.resize(static_cast<std::size_t>(L) * 2 * d);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t l = 0; l < static_cast<std::int64_t>(L); ++l) {
    std::mt19937_64 gen(slice_stream_seed(seed, static_cast<std::uint64_t>(l)));
    std::normal_distribution<double> normal(0.0, 1.0);
    double* u1 = s.frames.data() + static_cast<std::size_t>(l) * 2 * d;
    double* u2 = u1 + d;
    while (true) {
      for (std::uint32_t i = 0; i < d; ++i) u1[i] = normal(gen);
      for (std::uint32_t i = 0; i < d; ++i) u2[i] = normal(gen);
      // Gram-Schmidt with one re-orthogonalization pass; the diagonal of R is
      // positive by construction, which keeps the law Haar-uniform.
      double n1 = std::sqrt(dot(u1, u1, d));
      if (n1 < 1e-150) continue;
      for (std::uint32_t i = 0; i < d; ++i) u1[i] /= n1;
      double proj = dot(u1, u2, d);
      for (std::uint32_t i = 0; i < d; ++i) u2[i] -= proj * u1[i];
      double n2 = std::sqrt(dot(u2, u2, d));
      if (n2 < 1e-12) continue;
      for (std::uint32_t i = 0; i < d; ++i) u2[i] /= n2;
      proj = dot(u1, u2, d);
      for (std::uint32_t i = 0; i < d; ++i) u2[i] -= proj * u1[i];
      n2 = std::sqrt(dot(u2, u2, d));
      for (std::uint32_t i = 0; i < d; ++i) u2[i] /= n2;
      break;
    }
  }
  return s;
}

double frame_angle(const double* u1, const double* u2, const double* x, std::uint32_t d) {
  const double v1 = dot(u1, x, d);
  const double v2 = dot(u2, x, d);
  double a = std::atan2(v2, v1) / kTwoPi;
  if (a < 0.0) a += 1.0;
  if (a >= 1.0) a -= 1.0;
  return a;
}

ProjectedSlice project(const double* u1, const double* u2, const SphericalPointCloud& cloud,
                       double eps) {
  if (eps < 0.0) raise(errc::bad_config, "eps must be >= 0");
  const std::size_t n = cloud.size();
  const std::uint32_t d = cloud.d;
  ProjectedSlice out;
  out.angles.reserve(n);
  out.weights.reserve(n);
  double capped_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = cloud.point(i);
    const double v1 = dot(u1, x, d);
    const double v2 = dot(u2, x, d);
    const double r = std::sqrt(v1 * v1 + v2 * v2);
    if (r <= eps) {
      out.capped_indices.push_back(static_cast<std::uint32_t>(i));
      capped_mass += cloud.weights[i];
      continue;
    }
    double a = std::atan2(v2, v1) / kTwoPi;
    if (a < 0.0) a += 1.0;
    if (a >= 1.0) a -= 1.0;
    out.angles.push_back(a);
    out.weights.push_back(cloud.weights[i]);
  }
  if (out.angles.empty())
    raise(errc::all_points_capped, "every point lies within the eps-cap");
  if (!out.capped_indices.empty()) {
    const double share = capped_mass / static_cast<double>(out.weights.size());
    for (double& w : out.weights) w += share;
  }
  return out;
}

ProjectedSlice project(const SliceSet& slices, std::size_t l, const SphericalPointCloud& cloud,
                       double eps) {
  if (slices.d != cloud.d) raise(errc::dimension_mismatch, "slice and cloud dimension differ");
  return project(slices.u1(l), slices.u2(l), cloud, eps);
}

}  // namespace lssot
