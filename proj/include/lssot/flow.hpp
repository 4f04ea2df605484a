#pragma once

#include <cstdint>
#include <vector>

#include "lssot/embedding.hpp"
#include "lssot/slicer.hpp"

namespace lssot {

enum class FlowMode { riemannian, spherical_coordinates };

struct FlowConfig {
  std::int64_t steps = 100;
  double lr = 50.0;
  FlowMode mode = FlowMode::riemannian;
  std::uint32_t slices_per_step = 200;
  bool reseed_each_step = false;
  double eps = 1e-6;
  std::int64_t M = 512;
};

struct FlowTrajectory {
  std::vector<SphericalPointCloud> snapshots;  // steps + 1 entries
  std::vector<double> losses;                  // steps + 1 entries
};

// Euclidean gradient of the squared LSSOT objective with respect to the
// source positions, N-by-d row-major.  Per slice the grid matching between
// the projected source and target fixes a transport assignment; holding it
// fixed, each grid residual contributes its signed circular value times the
// Jacobian of the slice angle map at the assigned source point.  Capped
// points receive zero gradient for that slice.
std::vector<double> lssot_grad(const SphericalPointCloud& source,
                               const SphericalPointCloud& target, const SliceSet& slices,
                               std::int64_t M, double eps);
std::vector<double> lssot_grad_serial(const SphericalPointCloud& source,
                                      const SphericalPointCloud& target, const SliceSet& slices,
                                      std::int64_t M, double eps);

// g - x (g.x): Euclidean projection onto the tangent plane at unit x.
void tangent_project(const double* x, double* g, std::uint32_t d);

// exp_x(v) = x cos||v|| + (v/||v||) sin||v||; returns x when ||v|| < 1e-12.
void exp_map(const double* x, const double* v, std::uint32_t d, double* out);

// Gradient descent of the squared LSSOT objective from source toward target.
// Loss per step is the LSSOT distance under a fixed evaluation slice set:
// the gradient set itself when reseed_each_step is off, a separate fixed set
// when it is on.  Learning rate halves on a loss increase (at most 5 times).
FlowTrajectory run_flow(const SphericalPointCloud& source, const SphericalPointCloud& target,
                        const FlowConfig& cfg, std::uint64_t seed);

// Same flow with caller-provided slice sets (both fixed for the whole run).
FlowTrajectory run_flow(const SphericalPointCloud& source, const SphericalPointCloud& target,
                        const FlowConfig& cfg, const SliceSet& grad_slices,
                        const SliceSet& eval_slices);

}  // namespace lssot
