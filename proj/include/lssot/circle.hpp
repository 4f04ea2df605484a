#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "lssot/error.hpp"

namespace lssot {

// Discrete probability measure on the unit circle, angles in turns in [0,1).
// Atoms are sorted and strictly increasing; equal angles (within 1e-12) are
// merged at construction. cum_weights.back() is pinned to exactly 1.0.
struct CircularMeasure {
  std::vector<double> angles;
  std::vector<double> weights;
  std::vector<double> cum_weights;

  std::size_t size() const { return angles.size(); }
};

// LCOT embedding values on the midpoint grid x_k = (k+1/2)/M.  Values are
// unreduced reals (in turns); circular reduction happens only in circ_abs.
struct CircularDisplacement {
  std::vector<double> values;

  std::size_t grid_size() const { return values.size(); }
};

// Fractional part in [0,1).  Guards against the 1.0 rounding that fmod-style
// folding produces for tiny negative inputs.
inline double reduce_turn(double t) {
  double f = t - std::floor(t);
  if (f >= 1.0) f -= 1.0;
  return f;
}

// Circular absolute value: min(r mod 1, 1 - r mod 1) in [0, 1/2].
// Computed on |r| so that circ_abs(r) == circ_abs(-r) bit-for-bit.
inline double circ_abs(double r) {
  double a = std::abs(r);
  double f = a - std::floor(a);
  if (f >= 1.0) f -= 1.0;
  return std::min(f, 1.0 - f);
}

// Signed reduction to [-1/2, 1/2).
inline double circ_signed(double r) { return r - std::floor(r + 0.5); }

// Builds a measure from arbitrary angles (reduced mod 1) and optional
// nonnegative weights (normalized; uniform if omitted).
CircularMeasure from_points(const std::vector<double>& angles,
                            const std::optional<std::vector<double>>& weights = std::nullopt);

// Discrete uniform reference of M atoms at the grid midpoints (k+1/2)/M.
CircularMeasure uniform_grid(std::int64_t M);

// F(y) = mass of atoms with angle strictly below y, for y in [0,1).
double cdf(const CircularMeasure& m, double y);

// Quantile F^{-1}(s) = inf{x : F(x) > s}, extended by F^{-1}(s+n) = F^{-1}(s)+n.
double quantile(const CircularMeasure& m, double s);

// E(m) = sum w_i theta_i in the fixed [0,1) chart.
double mean_angle(const CircularMeasure& m);

// Minimizer of the squared-cost COT shift against the uniform reference:
// mean_angle(m) - 1/2.
double optimal_shift(const CircularMeasure& m);

// LCOT embedding against the uniform reference on an M-point midpoint grid:
// values[k] = F^{-1}(x_k - E + 1/2) - x_k.
CircularDisplacement lcot_embed(const CircularMeasure& m, std::int64_t M);

// L2 distance between displacement fields with the circular norm:
// sqrt((1/M) sum circ_abs(a_k - b_k)^2).
double lcot_distance(const CircularDisplacement& a, const CircularDisplacement& b);

// Midpoint quadrature of the COT integrand at shift alpha:
// (1/G) sum_k (F1^{-1}(x_k) - F2^{-1}(x_k - alpha))^2.
double cot_shift_cost(const CircularMeasure& m1, const CircularMeasure& m2, double alpha,
                      std::int64_t grid_size);

}  // namespace lssot
