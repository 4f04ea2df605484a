// Compares the OpenMP kernels against their serial references and reports
// wall times plus the largest output deviation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lssot/embedding.hpp"
#include "lssot/flow.hpp"

using namespace lssot;

namespace {

double wall_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

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

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 5000;
  int L = 300, M = 1024, K = 12;
  if (argc > 1) n = static_cast<std::size_t>(std::atoll(argv[1]));
  if (argc > 2) L = std::atoi(argv[2]);
  if (argc > 3) K = std::atoi(argv[3]);

#ifdef _OPENMP
  std::printf("# threads=%d\n", omp_get_max_threads());
#endif
  std::printf("kernel,serial_ms,parallel_ms,speedup,max_abs_diff\n");

  const SliceSet slices = sample_slices(11, L, 3);
  const SphericalPointCloud cloud = random_cloud(21, n, 3);

  {
    LssotEmbedding es, ep;
    const double ts = wall_ms([&] { es = embed_serial(cloud, slices, M, 1e-6); });
    const double tp = wall_ms([&] { ep = embed(cloud, slices, M, 1e-6); });
    std::printf("embed,%.2f,%.2f,%.2f,%.3g\n", ts, tp, ts / tp,
                max_abs_diff(es.rows, ep.rows));
  }

  {
    std::vector<SphericalPointCloud> clouds;
    for (int i = 0; i < K; ++i) clouds.push_back(random_cloud(100 + i, n / 5, 3));
    DistanceMatrix ds, dp;
    const double ts = wall_ms([&] { ds = pairwise_serial(clouds, slices, M, 1e-6); });
    const double tp = wall_ms([&] { dp = pairwise(clouds, slices, M, 1e-6); });
    std::printf("pairwise,%.2f,%.2f,%.2f,%.3g\n", ts, tp, ts / tp,
                max_abs_diff(ds.data, dp.data));
  }

  {
    const SphericalPointCloud src = random_cloud(31, 500, 3);
    const SphericalPointCloud tgt = random_cloud(32, 500, 3);
    std::vector<double> gs, gp;
    const double ts = wall_ms([&] { gs = lssot_grad_serial(src, tgt, slices, 512, 1e-6); });
    const double tp = wall_ms([&] { gp = lssot_grad(src, tgt, slices, 512, 1e-6); });
    std::printf("lssot_grad,%.2f,%.2f,%.2f,%.3g\n", ts, tp, ts / tp, max_abs_diff(gs, gp));
  }

  return 0;
}
