#include "lssot/sphere_stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace lssot {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Rotation taking the north pole to mu (Rodrigues), row-major 3x3.
std::array<double, 9> north_to(const std::array<double, 3>& mu) {
  const double c = mu[2];
  if (c > 1.0 - 1e-14) return {1, 0, 0, 0, 1, 0, 0, 0, 1};
  if (c < -1.0 + 1e-14) return {1, 0, 0, 0, -1, 0, 0, 0, -1};  // pi about x-axis
  const double vx = -mu[1], vy = mu[0];  // z cross mu
  const double f = 1.0 / (1.0 + c);
  return {c + vx * vx * f, vx * vy * f,     mu[0],
          vx * vy * f,     c + vy * vy * f, mu[1],
          -mu[0],          -mu[1],          c};
}

}  // namespace

SphericalPointCloud vmf_sample(const VmfParams& params, std::int64_t n, std::uint64_t seed) {
  if (params.kappa <= 0.0) raise(errc::bad_kappa, "kappa must be > 0");
  if (n < 1) raise(errc::bad_config, "vmf_sample needs n >= 1");
  std::array<double, 3> mu = params.mu;
  const double mn = std::sqrt(mu[0] * mu[0] + mu[1] * mu[1] + mu[2] * mu[2]);
  if (std::abs(mn - 1.0) > 1e-9) raise(errc::bad_config, "mu must be a unit vector");
  for (double& c : mu) c /= mn;

  const std::array<double, 9> R = north_to(mu);
  const double kappa = params.kappa;
  const double e2k = std::exp(-2.0 * kappa);

  std::mt19937_64 gen(mix(seed));
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SphericalPointCloud c;
  c.d = 3;
  c.points.resize(3 * n);
  c.weights.assign(n, 1.0 / static_cast<double>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = 1.0 - unif(gen);  // (0, 1]
    double w = 1.0 + std::log(u + (1.0 - u) * e2k) / kappa;
    w = std::clamp(w, -1.0, 1.0);
    const double psi = 2.0 * kPi * unif(gen);
    const double r = std::sqrt(std::max(0.0, 1.0 - w * w));
    const double p[3] = {r * std::cos(psi), r * std::sin(psi), w};
    double* out = c.point(i);
    for (int a = 0; a < 3; ++a)
      out[a] = R[a * 3 + 0] * p[0] + R[a * 3 + 1] * p[1] + R[a * 3 + 2] * p[2];
    const double nn = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
    for (int a = 0; a < 3; ++a) out[a] /= nn;
  }
  return c;
}

std::vector<std::array<double, 3>> fibonacci_sphere(std::int64_t n) {
  if (n < 1) raise(errc::bad_config, "fibonacci_sphere needs n >= 1");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double denom = static_cast<double>(std::max<std::int64_t>(n - 1, 1));
  std::vector<std::array<double, 3>> pts(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * static_cast<double>(i) / denom;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * static_cast<double>(i);
    pts[i] = {r * std::cos(a), r * std::sin(a), z};
    const double nn = std::sqrt(pts[i][0] * pts[i][0] + pts[i][1] * pts[i][1] + pts[i][2] * pts[i][2]);
    for (double& cst : pts[i]) cst /= nn;
  }
  return pts;
}

double geodesic(const double* a, const double* b, std::uint32_t d) {
  double dp = 0.0;
  for (std::uint32_t i = 0; i < d; ++i) dp += a[i] * b[i];
  return std::acos(std::clamp(dp, -1.0, 1.0));
}

EmbeddingResult classical_mds(const DistanceMatrix& dist, std::size_t p) {
  const std::size_t K = dist.k;
  if (p < 1) raise(errc::bad_config, "classical_mds needs p >= 1");
  p = std::min(p, K);

  Eigen::MatrixXd D2(K, K);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) {
      const double v = dist.at(i, j);
      D2(i, j) = v * v;
    }
  const Eigen::VectorXd rowm = D2.rowwise().mean();
  const double total = D2.mean();
  Eigen::MatrixXd B(K, K);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j)
      B(i, j) = -0.5 * (D2(i, j) - rowm(i) - rowm(j) + total);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  EmbeddingResult res;
  res.k = K;
  res.p = p;
  res.eigenvalues.resize(p);
  res.coordinates.assign(K * p, 0.0);
  // eigenvalues come out ascending; take the top p
  for (std::size_t c = 0; c < p; ++c) {
    const std::size_t src = K - 1 - c;
    const double lam = es.eigenvalues()(src);
    res.eigenvalues[c] = lam;
    const double s = lam > 0.0 ? std::sqrt(lam) : 0.0;
    for (std::size_t i = 0; i < K; ++i) res.coordinates[i * p + c] = s * es.eigenvectors()(i, src);
  }
  return res;
}

std::vector<double> random_rotation(std::uint64_t seed, std::uint32_t d) {
  if (d < 2) raise(errc::bad_dimension, "random_rotation needs d >= 2");
  std::mt19937_64 gen(mix(seed ^ 0xA07A7E5EEDULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd Z(d, d);
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = 0; j < d; ++j) Z(i, j) = normal(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd Rm = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::uint32_t j = 0; j < d; ++j)
    if (Rm(j, j) < 0.0) Q.col(j) = -Q.col(j);
  if (Q.determinant() < 0.0) Q.col(d - 1) = -Q.col(d - 1);
  std::vector<double> out(static_cast<std::size_t>(d) * d);
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = 0; j < d; ++j) out[i * d + j] = Q(i, j);
  return out;
}

SphericalPointCloud rotate_cloud(const SphericalPointCloud& cloud, const std::vector<double>& R) {
  const std::uint32_t d = cloud.d;
  if (R.size() != static_cast<std::size_t>(d) * d)
    raise(errc::dimension_mismatch, "rotation matrix size mismatch");
  SphericalPointCloud out = cloud;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double* x = cloud.point(i);
    double* y = out.point(i);
    for (std::uint32_t r = 0; r < d; ++r) {
      double acc = 0.0;
      for (std::uint32_t cix = 0; cix < d; ++cix) acc += R[r * d + cix] * x[cix];
      y[r] = acc;
    }
  }
  return out;
}

}  // namespace lssot
