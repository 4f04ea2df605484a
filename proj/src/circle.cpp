#include "lssot/circle.hpp"

#include <algorithm>
#include <numeric>

namespace lssot {

namespace {
constexpr double kMergeTol = 1e-12;
}

CircularMeasure from_points(const std::vector<double>& angles,
                            const std::optional<std::vector<double>>& weights) {
  const std::size_t n = angles.size();
  if (n == 0) raise(errc::empty_measure, "measure has no atoms");
  if (weights && weights->size() != n)
    raise(errc::bad_config, "angles and weights length mismatch");

  for (double a : angles)
    if (!std::isfinite(a)) raise(errc::not_finite, "non-finite angle");

  double total = 0.0;
  if (weights) {
    for (double w : *weights) {
      if (!std::isfinite(w)) raise(errc::not_finite, "non-finite weight");
      if (w < 0.0) raise(errc::negative_weight, "negative weight");
      total += w;
    }
    if (total <= 0.0) raise(errc::empty_measure, "total weight is zero");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> reduced(n);
  for (std::size_t i = 0; i < n; ++i) reduced[i] = reduce_turn(angles[i]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return reduced[a] < reduced[b]; });

  CircularMeasure m;
  m.angles.reserve(n);
  m.weights.reserve(n);
  for (std::size_t i : order) {
    const double a = reduced[i];
    const double w = weights ? (*weights)[i] / total : 1.0 / static_cast<double>(n);
    if (!m.angles.empty() && a - m.angles.back() <= kMergeTol) {
      m.weights.back() += w;
    } else {
      m.angles.push_back(a);
      m.weights.push_back(w);
    }
  }

  // Zero-weight atoms are inert for cdf/quantile/mean; drop them.
  std::size_t out = 0;
  for (std::size_t i = 0; i < m.angles.size(); ++i) {
    if (m.weights[i] > 0.0) {
      m.angles[out] = m.angles[i];
      m.weights[out] = m.weights[i];
      ++out;
    }
  }
  m.angles.resize(out);
  m.weights.resize(out);
  if (out == 0) raise(errc::empty_measure, "all atoms have zero weight");

  m.cum_weights.resize(out);
  double acc = 0.0;
  for (std::size_t i = 0; i < out; ++i) {
    acc += m.weights[i];
    m.cum_weights[i] = acc;
  }
  m.cum_weights.back() = 1.0;
  return m;
}

CircularMeasure uniform_grid(std::int64_t M) {
  if (M < 1) raise(errc::bad_config, "uniform_grid needs M >= 1");
  CircularMeasure m;
  m.angles.resize(M);
  m.weights.resize(M);
  m.cum_weights.resize(M);
  const double inv = 1.0 / static_cast<double>(M);
  for (std::int64_t k = 0; k < M; ++k) {
    m.angles[k] = (static_cast<double>(k) + 0.5) * inv;
    m.weights[k] = inv;
    m.cum_weights[k] = static_cast<double>(k + 1) * inv;
  }
  m.cum_weights.back() = 1.0;
  return m;
}

double cdf(const CircularMeasure& m, double y) {
  auto it = std::lower_bound(m.angles.begin(), m.angles.end(), y);
  const std::size_t i = static_cast<std::size_t>(it - m.angles.begin());
  return i == 0 ? 0.0 : m.cum_weights[i - 1];
}

double quantile(const CircularMeasure& m, double s) {
  const double n = std::floor(s);
  double f = s - n;
  if (f >= 1.0) f -= 1.0;
  auto it = std::upper_bound(m.cum_weights.begin(), m.cum_weights.end(), f);
  std::size_t i = static_cast<std::size_t>(it - m.cum_weights.begin());
  if (i >= m.angles.size()) i = m.angles.size() - 1;
  return m.angles[i] + n;
}

double mean_angle(const CircularMeasure& m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) acc += m.weights[i] * m.angles[i];
  return acc;
}

double optimal_shift(const CircularMeasure& m) { return mean_angle(m) - 0.5; }

CircularDisplacement lcot_embed(const CircularMeasure& m, std::int64_t M) {
  if (M < 1) raise(errc::bad_config, "lcot_embed needs M >= 1");
  const double E = mean_angle(m);
  CircularDisplacement d;
  d.values.resize(M);
  const double inv = 1.0 / static_cast<double>(M);
  for (std::int64_t k = 0; k < M; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * inv;
    d.values[k] = quantile(m, x - E + 0.5) - x;
  }
  return d;
}

double lcot_distance(const CircularDisplacement& a, const CircularDisplacement& b) {
  if (a.grid_size() != b.grid_size())
    raise(errc::grid_mismatch, "displacement grid sizes differ");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double c = circ_abs(a.values[k] - b.values[k]);
    acc += c * c;
  }
  return std::sqrt(acc / static_cast<double>(a.values.size()));
}

double cot_shift_cost(const CircularMeasure& m1, const CircularMeasure& m2, double alpha,
                      std::int64_t grid_size) {
  if (grid_size < 1) raise(errc::bad_config, "cot_shift_cost needs grid_size >= 1");
  const double inv = 1.0 / static_cast<double>(grid_size);
  double acc = 0.0;
  for (std::int64_t k = 0; k < grid_size; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * inv;
    const double diff = quantile(m1, x) - quantile(m2, x - alpha);
    acc += diff * diff;
  }
  return acc * inv;
}

}  // namespace lssot
