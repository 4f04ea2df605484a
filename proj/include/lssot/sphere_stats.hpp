#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lssot/embedding.hpp"
#include "lssot/slicer.hpp"

namespace lssot {

struct VmfParams {
  std::array<double, 3> mu{0.0, 0.0, 1.0};
  double kappa = 1.0;
};

struct EmbeddingResult {
  std::vector<double> coordinates;  // K x p row-major
  std::vector<double> eigenvalues;  // p, nonincreasing (raw, may be negative)
  std::size_t k = 0;
  std::size_t p = 0;
};

// n i.i.d. von Mises-Fisher samples on S^2 via the closed-form inverse CDF of
// the cosine colatitude, rotated so the pole maps to mu.  Uniform weights.
SphericalPointCloud vmf_sample(const VmfParams& params, std::int64_t n, std::uint64_t seed);

// Golden-angle spiral points; n == 1 gives the north pole.
std::vector<std::array<double, 3>> fibonacci_sphere(std::int64_t n);

// Geodesic (great-circle) distance between unit vectors.
double geodesic(const double* a, const double* b, std::uint32_t d);

// Classical MDS: eigendecomposition of the double-centered squared-distance
// matrix; negative eigenvalues are clamped in the coordinates and reported
// raw in eigenvalues.
EmbeddingResult classical_mds(const DistanceMatrix& dist, std::size_t p);

// Haar-uniform rotation matrix (d x d row-major, det +1) from a seed.
std::vector<double> random_rotation(std::uint64_t seed, std::uint32_t d);

// Applies a d x d row-major matrix to every point.
SphericalPointCloud rotate_cloud(const SphericalPointCloud& cloud, const std::vector<double>& R);

}  // namespace lssot
