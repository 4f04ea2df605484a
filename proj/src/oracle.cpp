#include "lssot/oracle.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lssot::oracle {

ShiftResult cot_bruteforce(const CircularMeasure& m1, const CircularMeasure& m2,
                           const OracleConfig& cfg) {
  const std::int64_t A = cfg.alpha_grid;
  if (A < 2) raise(errc::bad_config, "alpha_grid must be >= 2");
  const std::int64_t r = std::max<std::int64_t>(1, (cfg.dense_M + A - 1) / A);
  const std::int64_t G = r * A;

  // Quantile tables on the quadrature grid; the alpha grid lands evaluation
  // points back on it, shifted by whole indices with winding corrections.
  std::vector<double> q1(G), q2(G);
  const double inv = 1.0 / static_cast<double>(G);
  for (std::int64_t k = 0; k < G; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * inv;
    q1[k] = quantile(m1, x);
    q2[k] = quantile(m2, x);
  }

  std::vector<double> costs(A);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t j = 0; j < A; ++j) {
    // alpha_j = -1/2 + j/A ; x_k - alpha_j = x_{k + G/2 - j r} + winding
    const std::int64_t shift = G / 2 - j * r;
    double acc = 0.0;
    for (std::int64_t k = 0; k < G; ++k) {
      std::int64_t m = k + shift;
      double wind = 0.0;
      if (m < 0) {
        m += G;
        wind = -1.0;
      } else if (m >= G) {
        m -= G;
        wind = 1.0;
      }
      const double diff = q1[k] - (q2[m] + wind);
      acc += diff * diff;
    }
    costs[j] = acc * inv;
  }

  ShiftResult best{-0.5, costs[0]};
  for (std::int64_t j = 1; j < A; ++j) {
    if (costs[j] < best.cost) {
      best.cost = costs[j];
      best.alpha = -0.5 + static_cast<double>(j) / static_cast<double>(A);
    }
  }
  return best;
}

CircularDisplacement lcot_dense(const CircularMeasure& m, const OracleConfig& cfg) {
  const std::int64_t G = cfg.dense_M;
  if (G < 1) raise(errc::bad_config, "dense_M must be >= 1");
  double E = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) E += m.weights[i] * m.angles[i];

  CircularDisplacement d;
  d.values.resize(G);
  const double inv = 1.0 / static_cast<double>(G);
  for (std::int64_t k = 0; k < G; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * inv;
    double s = x - E + 0.5;
    const double n = std::floor(s);
    double f = s - n;
    if (f >= 1.0) f -= 1.0;
    // deliberately O(N) per grid point: independent of the fast search path
    std::size_t idx = m.size() - 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.cum_weights[i] > f) {
        idx = i;
        break;
      }
    }
    d.values[k] = m.angles[idx] + n - x;
  }
  return d;
}

std::vector<double> finite_diff_grad(const std::function<double(const SphericalPointCloud&)>& loss,
                                     const SphericalPointCloud& cloud, const OracleConfig& cfg) {
  const double h = cfg.fd_step;
  const std::uint32_t d = cloud.d;
  const std::size_t N = cloud.size();
  std::vector<double> grad(N * d, 0.0);

  SphericalPointCloud work = cloud;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::uint32_t c = 0; c < d; ++c) {
      double* p = work.point(i);
      const double* orig = cloud.point(i);

      std::copy(orig, orig + d, p);
      p[c] += h;
      double n = 0.0;
      for (std::uint32_t a = 0; a < d; ++a) n += p[a] * p[a];
      n = std::sqrt(n);
      for (std::uint32_t a = 0; a < d; ++a) p[a] /= n;
      const double fp = loss(work);

      std::copy(orig, orig + d, p);
      p[c] -= h;
      n = 0.0;
      for (std::uint32_t a = 0; a < d; ++a) n += p[a] * p[a];
      n = std::sqrt(n);
      for (std::uint32_t a = 0; a < d; ++a) p[a] /= n;
      const double fm = loss(work);

      std::copy(orig, orig + d, p);
      grad[i * d + c] = (fp - fm) / (2.0 * h);
    }
  }

  for (std::size_t i = 0; i < N; ++i) {
    const double* x = cloud.point(i);
    double* g = grad.data() + i * d;
    double dp = 0.0;
    for (std::uint32_t c = 0; c < d; ++c) dp += x[c] * g[c];
    for (std::uint32_t c = 0; c < d; ++c) g[c] -= dp * x[c];
  }
  return grad;
}

}  // namespace lssot::oracle
