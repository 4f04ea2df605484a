#pragma once

#include <cstdint>
#include <vector>

#include "lssot/error.hpp"

namespace lssot {

// L orthonormal d-by-2 frames sampled uniformly from the Stiefel manifold
// V_2(R^d), plus the seed that generated them.  Frame l is stored as its two
// columns back to back: frames[l*2d .. l*2d+d) = u1, then u2.
struct SliceSet {
  std::vector<double> frames;
  std::uint64_t seed = 0;
  std::uint32_t L = 0;
  std::uint32_t d = 0;

  const double* u1(std::size_t l) const { return frames.data() + l * 2 * d; }
  const double* u2(std::size_t l) const { return frames.data() + l * 2 * d + d; }
};

// N unit vectors in R^d with weights summing to 1 (row-major points).
struct SphericalPointCloud {
  std::vector<double> points;
  std::vector<double> weights;
  std::uint32_t d = 0;

  std::size_t size() const { return weights.size(); }
  const double* point(std::size_t i) const { return points.data() + i * d; }
  double* point(std::size_t i) { return points.data() + i * d; }
};

// Result of projecting a cloud to one slice circle.  angles keeps the
// original point order with capped points removed; weights carry the equal
// redistribution of the capped mass.
struct ProjectedSlice {
  std::vector<double> angles;
  std::vector<double> weights;
  std::vector<std::uint32_t> capped_indices;
};

// Builds a cloud from row-major coordinates; points must be unit within
// norm_tol (then exactly renormalized), weights normalized (uniform if empty).
SphericalPointCloud make_cloud(const std::vector<double>& points, std::uint32_t d,
                               const std::vector<double>& weights = {},
                               double norm_tol = 1e-6);

// Deterministic per-slice RNG stream seed.
std::uint64_t slice_stream_seed(std::uint64_t seed, std::uint64_t index);

// L Haar-uniform 2-frames via QR (Gram-Schmidt, positive R diagonal) of d-by-2
// standard Gaussian matrices; frame l depends only on (seed, l).
SliceSet sample_slices(std::uint64_t seed, std::uint32_t L, std::uint32_t d);

// Angle of a point on the slice circle, in turns in [0,1).
double frame_angle(const double* u1, const double* u2, const double* x, std::uint32_t d);

// Projects the cloud onto the great circle of frame l; points with
// ||U^T x|| <= eps are capped and their mass spread equally over survivors.
ProjectedSlice project(const SliceSet& slices, std::size_t l, const SphericalPointCloud& cloud,
                       double eps);
ProjectedSlice project(const double* u1, const double* u2, const SphericalPointCloud& cloud,
                       double eps);

}  // namespace lssot
