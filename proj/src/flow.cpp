#include "lssot/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lssot {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::size_t kGradBlock = 64;  // slices per reduction block, fixed across thread counts

// Per-slice gradient contribution, accumulated into grad (N x d).
void slice_grad(const SphericalPointCloud& source, const SphericalPointCloud& target,
                const double* u1, const double* u2, std::int64_t M, double eps,
                double scale, double* grad, std::vector<double>& racc) {
  const std::uint32_t d = source.d;
  const std::size_t N = source.size();

  ProjectedSlice ps, pt;
  try {
    ps = project(u1, u2, source, eps);
    pt = project(u1, u2, target, eps);
  } catch (const error& e) {
    if (e.code() == errc::all_points_capped) return;
    throw;
  }

  // Sorted source atoms with original point ids (no merging so every grid
  // residual attributes to one point).
  const std::size_t ns = ps.angles.size();
  std::vector<std::uint32_t> retained;
  retained.reserve(ns);
  {
    std::size_t ci = 0;
    for (std::uint32_t i = 0; i < N; ++i) {
      if (ci < ps.capped_indices.size() && ps.capped_indices[ci] == i) {
        ++ci;
        continue;
      }
      retained.push_back(i);
    }
  }
  std::vector<std::uint32_t> order(ns);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return ps.angles[a] < ps.angles[b];
  });
  std::vector<double> a_sorted(ns), cum(ns);
  double acc = 0.0, Es = 0.0;
  for (std::size_t r = 0; r < ns; ++r) {
    const double a = ps.angles[order[r]];
    const double w = ps.weights[order[r]];
    a_sorted[r] = a;
    acc += w;
    cum[r] = acc;
    Es += w * a;
  }
  cum[ns - 1] = 1.0;

  const CircularMeasure mt = from_points(pt.angles, pt.weights);
  const double Et = mean_angle(mt);

  racc.assign(ns, 0.0);
  const double inv = 1.0 / static_cast<double>(M);
  for (std::int64_t k = 0; k < M; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * inv;
    double s = x - Es + 0.5;
    const double nwind = std::floor(s);
    double f = s - nwind;
    if (f >= 1.0) f -= 1.0;
    auto it = std::upper_bound(cum.begin(), cum.end(), f);
    std::size_t isel = static_cast<std::size_t>(it - cum.begin());
    if (isel >= ns) isel = ns - 1;
    const double qs = a_sorted[isel] + nwind;
    const double qt = quantile(mt, x - Et + 0.5);
    racc[isel] += circ_signed(qs - qt);
  }

  for (std::size_t r = 0; r < ns; ++r) {
    if (racc[r] == 0.0) continue;
    const std::uint32_t i = retained[order[r]];
    const double* xpt = source.point(i);
    double v1 = 0.0, v2 = 0.0;
    for (std::uint32_t c = 0; c < d; ++c) {
      v1 += u1[c] * xpt[c];
      v2 += u2[c] * xpt[c];
    }
    const double denom = kTwoPi * (v1 * v1 + v2 * v2);
    const double coef = scale * racc[r] / denom;
    double* g = grad + static_cast<std::size_t>(i) * d;
    for (std::uint32_t c = 0; c < d; ++c) g[c] += coef * (v1 * u2[c] - v2 * u1[c]);
  }
}

std::vector<double> grad_impl(const SphericalPointCloud& source,
                              const SphericalPointCloud& target, const SliceSet& slices,
                              std::int64_t M, double eps, bool parallel) {
  if (source.d != target.d || source.d != slices.d)
    raise(errc::dimension_mismatch, "source/target/slice dimensions differ");
  if (M < 1) raise(errc::bad_config, "lssot_grad needs M >= 1");

  const std::uint32_t d = source.d;
  const std::size_t N = source.size();
  const std::size_t L = slices.L;
  const double scale = 2.0 / (static_cast<double>(L) * static_cast<double>(M));

  if (d == 2) {
    // Canonical chart, matching the d == 2 embedding path.
    static const double id1[2] = {1.0, 0.0};
    static const double id2[2] = {0.0, 1.0};
    std::vector<double> grad(N * d, 0.0);
    std::vector<double> racc;
    slice_grad(source, target, id1, id2, M, eps, 2.0 / static_cast<double>(M), grad.data(),
               racc);
    return grad;
  }

  const std::size_t nblocks = (L + kGradBlock - 1) / kGradBlock;
  std::vector<std::vector<double>> partials(nblocks);

  auto run_block = [&](std::size_t b) {
    auto& part = partials[b];
    part.assign(N * d, 0.0);
    std::vector<double> racc;
    const std::size_t lo = b * kGradBlock;
    const std::size_t hi = std::min(L, lo + kGradBlock);
    for (std::size_t l = lo; l < hi; ++l)
      slice_grad(source, target, slices.u1(l), slices.u2(l), M, eps, scale, part.data(), racc);
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) run_block(b);
  } else {
    for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
  }

  std::vector<double> grad(N * d, 0.0);
  for (std::size_t b = 0; b < nblocks; ++b)
    for (std::size_t i = 0; i < N * d; ++i) grad[i] += partials[b][i];
  return grad;
}

}  // namespace

std::vector<double> lssot_grad(const SphericalPointCloud& source,
                               const SphericalPointCloud& target, const SliceSet& slices,
                               std::int64_t M, double eps) {
  return grad_impl(source, target, slices, M, eps, true);
}

std::vector<double> lssot_grad_serial(const SphericalPointCloud& source,
                                      const SphericalPointCloud& target, const SliceSet& slices,
                                      std::int64_t M, double eps) {
  return grad_impl(source, target, slices, M, eps, false);
}

void tangent_project(const double* x, double* g, std::uint32_t d) {
  double dp = 0.0;
  for (std::uint32_t c = 0; c < d; ++c) dp += x[c] * g[c];
  for (std::uint32_t c = 0; c < d; ++c) g[c] -= dp * x[c];
}

void exp_map(const double* x, const double* v, std::uint32_t d, double* out) {
  double n2 = 0.0;
  for (std::uint32_t c = 0; c < d; ++c) n2 += v[c] * v[c];
  const double n = std::sqrt(n2);
  if (n < 1e-12) {
    std::copy(x, x + d, out);
    return;
  }
  const double cs = std::cos(n), sn = std::sin(n) / n;
  for (std::uint32_t c = 0; c < d; ++c) out[c] = x[c] * cs + v[c] * sn;
}

namespace {

void riemannian_step(SphericalPointCloud& cloud, const std::vector<double>& grad, double lr) {
  const std::uint32_t d = cloud.d;
  std::vector<double> v(d), out(d);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double* x = cloud.point(i);
    const double* g = grad.data() + i * d;
    double dp = 0.0;
    for (std::uint32_t c = 0; c < d; ++c) dp += x[c] * g[c];
    for (std::uint32_t c = 0; c < d; ++c) v[c] = -lr * (g[c] - dp * x[c]);
    exp_map(x, v.data(), d, out.data());
    std::copy(out.begin(), out.end(), x);
  }
}

void spherical_coordinate_step(SphericalPointCloud& cloud, const std::vector<double>& grad,
                               double lr) {
  // Azimuth/colatitude chart on S^2; plain gradient step on (theta, phi).
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double* p = cloud.point(i);
    const double* g = grad.data() + i * 3;
    const double theta = std::atan2(p[1], p[0]);
    const double phi = std::acos(std::clamp(p[2], -1.0, 1.0));
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double dtheta[3] = {-st * sp, ct * sp, 0.0};
    const double dphi[3] = {ct * cp, st * cp, -sp};
    double gt = 0.0, gp = 0.0;
    for (int c = 0; c < 3; ++c) {
      gt += g[c] * dtheta[c];
      gp += g[c] * dphi[c];
    }
    const double nt = theta - lr * gt;
    const double np = phi - lr * gp;
    p[0] = std::cos(nt) * std::sin(np);
    p[1] = std::sin(nt) * std::sin(np);
    p[2] = std::cos(np);
    const double nrm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (int c = 0; c < 3; ++c) p[c] /= nrm;
  }
}

FlowTrajectory flow_loop(const SphericalPointCloud& source, const SphericalPointCloud& target,
                         const FlowConfig& cfg, const SliceSet* fixed_grad,
                         const SliceSet& eval_slices, std::uint64_t seed) {
  if (cfg.steps < 1 || cfg.lr <= 0.0 || cfg.M < 1 || cfg.slices_per_step < 1)
    raise(errc::bad_config, "invalid flow config");
  if (cfg.mode == FlowMode::spherical_coordinates && source.d != 3)
    raise(errc::bad_dimension, "spherical-coordinate mode requires d == 3");
  if (source.d != target.d) raise(errc::dimension_mismatch, "source/target dimensions differ");

  const LssotEmbedding target_emb = embed(target, eval_slices, cfg.M, cfg.eps);
  auto eval_loss = [&](const SphericalPointCloud& c) {
    return distance(embed(c, eval_slices, cfg.M, cfg.eps), target_emb);
  };

  FlowTrajectory traj;
  traj.snapshots.reserve(cfg.steps + 1);
  traj.losses.reserve(cfg.steps + 1);
  SphericalPointCloud cur = source;
  traj.snapshots.push_back(cur);
  traj.losses.push_back(eval_loss(cur));

  double lr = cfg.lr;
  int halvings = 0;
  for (std::int64_t step = 0; step < cfg.steps; ++step) {
    const SliceSet* gs = fixed_grad;
    SliceSet reseeded;
    if (gs == nullptr) {
      reseeded = sample_slices(slice_stream_seed(seed, 0x1000000ULL + step),
                               cfg.slices_per_step, source.d);
      gs = &reseeded;
    }
    std::vector<double> grad = lssot_grad(cur, target, *gs, cfg.M, cfg.eps);
    if (cfg.mode == FlowMode::riemannian)
      riemannian_step(cur, grad, lr);
    else
      spherical_coordinate_step(cur, grad, lr);
    const double loss = eval_loss(cur);
    if (loss > traj.losses.back() && halvings < 5) {
      lr *= 0.5;
      ++halvings;
    }
    traj.snapshots.push_back(cur);
    traj.losses.push_back(loss);
  }
  return traj;
}

}  // namespace

FlowTrajectory run_flow(const SphericalPointCloud& source, const SphericalPointCloud& target,
                        const FlowConfig& cfg, std::uint64_t seed) {
  if (cfg.reseed_each_step) {
    const SliceSet eval = sample_slices(slice_stream_seed(seed, 0xEEEEULL),
                                        cfg.slices_per_step, source.d);
    return flow_loop(source, target, cfg, nullptr, eval, seed);
  }
  const SliceSet grad_slices = sample_slices(seed, cfg.slices_per_step, source.d);
  return flow_loop(source, target, cfg, &grad_slices, grad_slices, seed);
}

FlowTrajectory run_flow(const SphericalPointCloud& source, const SphericalPointCloud& target,
                        const FlowConfig& cfg, const SliceSet& grad_slices,
                        const SliceSet& eval_slices) {
  return flow_loop(source, target, cfg, &grad_slices, eval_slices, 0);
}

}  // namespace lssot
