#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lssot/circle.hpp"
#include "lssot/slicer.hpp"

namespace lssot::oracle {

struct OracleConfig {
  std::int64_t alpha_grid = 10000;
  std::int64_t dense_M = 100000;
  double fd_step = 1e-6;
};

struct ShiftResult {
  double alpha = 0.0;
  double cost = 0.0;
};

// Exhaustive grid search over alpha in [-1/2, 1/2) of the midpoint-quadrature
// COT cost on a grid of ceil(dense_M / alpha_grid) * alpha_grid points.  The
// shift grid divides the quadrature grid, so each cost is evaluated from
// precomputed quantile tables; values match cot_shift_cost on that grid.
ShiftResult cot_bruteforce(const CircularMeasure& m1, const CircularMeasure& m2,
                           const OracleConfig& cfg);

// LCOT embedding evaluated from the definition at dense_M resolution with a
// linear-scan quantile; shares nothing with the fast path beyond the type.
CircularDisplacement lcot_dense(const CircularMeasure& m, const OracleConfig& cfg);

// Central finite differences of a scalar loss per point coordinate, with
// perturbed points renormalized onto the sphere, then tangentially projected.
// Returns an N x d row-major gradient.
std::vector<double> finite_diff_grad(const std::function<double(const SphericalPointCloud&)>& loss,
                                     const SphericalPointCloud& cloud, const OracleConfig& cfg);

}  // namespace lssot::oracle
