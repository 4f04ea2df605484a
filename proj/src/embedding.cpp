#include "lssot/embedding.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lssot {

namespace {

// One slice row: project, build the circular measure, evaluate the LCOT
// embedding on the M-grid.  Returns false if the slice capped every point.
bool slice_row(const SphericalPointCloud& cloud, const double* u1, const double* u2,
               std::int64_t M, double eps, double* out) {
  ProjectedSlice ps;
  try {
    ps = project(u1, u2, cloud, eps);
  } catch (const error& e) {
    if (e.code() == errc::all_points_capped) return false;
    throw;
  }
  CircularMeasure m = from_points(ps.angles, ps.weights);
  const double E = mean_angle(m);
  const double inv = 1.0 / static_cast<double>(M);
  for (std::int64_t k = 0; k < M; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * inv;
    out[k] = quantile(m, x - E + 0.5) - x;
  }
  return true;
}

// Canonical-chart angles for d == 2: the chart rotation of a 2-frame cancels
// in the continuum LCOT but perturbs the finite grid sums, so all slices are
// evaluated in the fixed chart and rows coincide.
bool canonical_row_2d(const SphericalPointCloud& cloud, std::int64_t M, double eps, double* out) {
  static const double id1[2] = {1.0, 0.0};
  static const double id2[2] = {0.0, 1.0};
  return slice_row(cloud, id1, id2, M, eps, out);
}

LssotEmbedding embed_impl(const SphericalPointCloud& cloud, const SliceSet& slices,
                          std::int64_t M, double eps, bool parallel) {
  if (cloud.d != slices.d) raise(errc::dimension_mismatch, "cloud and slice dimension differ");
  if (M < 1) raise(errc::bad_config, "embed needs M >= 1");

  LssotEmbedding e;
  e.slice_seed = slices.seed;
  e.L = slices.L;
  e.M = static_cast<std::uint32_t>(M);
  e.d = slices.d;

  const std::size_t L = slices.L;
  std::vector<double> all(L * static_cast<std::size_t>(M));
  std::vector<char> ok(L, 0);

  if (cloud.d == 2) {
    std::vector<double> row(M);
    if (!canonical_row_2d(cloud, M, eps, row.data()))
      raise(errc::embedding_failed, "every slice dropped");
    for (std::size_t l = 0; l < L; ++l) {
      std::copy(row.begin(), row.end(), all.begin() + l * M);
      ok[l] = 1;
    }
  } else if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
    for (std::int64_t l = 0; l < static_cast<std::int64_t>(L); ++l)
      ok[l] = slice_row(cloud, slices.u1(l), slices.u2(l), M, eps, all.data() + l * M) ? 1 : 0;
  } else {
    for (std::size_t l = 0; l < L; ++l)
      ok[l] = slice_row(cloud, slices.u1(l), slices.u2(l), M, eps, all.data() + l * M) ? 1 : 0;
  }

  for (std::size_t l = 0; l < L; ++l) {
    if (ok[l])
      e.retained_slices.push_back(static_cast<std::uint32_t>(l));
    else
      e.dropped_slices.push_back(static_cast<std::uint32_t>(l));
  }
  if (e.retained_slices.empty()) raise(errc::embedding_failed, "every slice dropped");

  e.rows.resize(e.retained_slices.size() * static_cast<std::size_t>(M));
  for (std::size_t r = 0; r < e.retained_slices.size(); ++r) {
    const double* src = all.data() + static_cast<std::size_t>(e.retained_slices[r]) * M;
    std::copy(src, src + M, e.rows.begin() + r * M);
  }
  return e;
}

double row_dist2(const double* a, const double* b, std::uint32_t M) {
  double acc = 0.0;
  for (std::uint32_t k = 0; k < M; ++k) {
    const double c = circ_abs(a[k] - b[k]);
    acc += c * c;
  }
  return acc / static_cast<double>(M);
}

void check_provenance(const LssotEmbedding& a, const LssotEmbedding& b) {
  if (a.slice_seed != b.slice_seed || a.L != b.L || a.d != b.d)
    raise(errc::slice_set_mismatch, "embeddings built from different slice sets");
  if (a.M != b.M) raise(errc::grid_mismatch, "embeddings built on different grids");
}

DistanceMatrix pairwise_impl(const std::vector<SphericalPointCloud>& clouds,
                             const SliceSet& slices, std::int64_t M, double eps, bool parallel) {
  const std::size_t K = clouds.size();
  if (K == 0) raise(errc::bad_config, "pairwise needs at least one cloud");
  for (const auto& c : clouds)
    if (c.d != slices.d) raise(errc::dimension_mismatch, "cloud dimension differs from slices");

  std::vector<LssotEmbedding> embs(K);
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(K); ++i)
      embs[i] = embed_impl(clouds[i], slices, M, eps, false);
  } else {
    for (std::size_t i = 0; i < K; ++i) embs[i] = embed_impl(clouds[i], slices, M, eps, false);
  }

  DistanceMatrix dm;
  dm.k = K;
  dm.data.assign(K * K, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = i + 1; j < K; ++j) pairs.emplace_back(i, j);
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::int64_t p = 0; p < static_cast<std::int64_t>(pairs.size()); ++p) {
      const auto [i, j] = pairs[p];
      const double v = distance(embs[i], embs[j]);
      dm.data[i * K + j] = v;
      dm.data[j * K + i] = v;
    }
  } else {
    for (const auto& [i, j] : pairs) {
      const double v = distance(embs[i], embs[j]);
      dm.data[i * K + j] = v;
      dm.data[j * K + i] = v;
    }
  }
  return dm;
}

// Quantile table of a projected measure on the alpha_grid midpoints.
struct SliceTables {
  std::vector<double> q1, q2;
  bool ok = false;
};

double ssw_slice_min_cost(const std::vector<double>& q1, const std::vector<double>& q2,
                          std::int64_t A) {
  // cost(alpha_j) with alpha_j = -1/2 + j/A equals the midpoint quadrature of
  // the COT integrand on the same A-grid; evaluation points land back on the
  // grid, so the sweep works off the two tables with winding corrections.
  const double inv = 1.0 / static_cast<double>(A);
  double best = 0.0;
  for (std::int64_t j = 0; j < A; ++j) {
    double acc = 0.0;
    const std::int64_t shift = A / 2 - j;
    for (std::int64_t k = 0; k < A; ++k) {
      std::int64_t m = k + shift;
      double wind = 0.0;
      if (m < 0) {
        m += A;
        wind = -1.0;
      } else if (m >= A) {
        m -= A;
        wind = 1.0;
      }
      const double diff = q1[k] - (q2[m] + wind);
      acc += diff * diff;
    }
    acc *= inv;
    if (j == 0 || acc < best) best = acc;
  }
  return best;
}

}  // namespace

LssotEmbedding embed(const SphericalPointCloud& cloud, const SliceSet& slices, std::int64_t M,
                     double eps) {
  return embed_impl(cloud, slices, M, eps, true);
}

LssotEmbedding embed_serial(const SphericalPointCloud& cloud, const SliceSet& slices,
                            std::int64_t M, double eps) {
  return embed_impl(cloud, slices, M, eps, false);
}

double distance(const LssotEmbedding& a, const LssotEmbedding& b) {
  check_provenance(a, b);
  double acc = 0.0;
  std::size_t n_common = 0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.retained_slices.size() && ib < b.retained_slices.size()) {
    if (a.retained_slices[ia] < b.retained_slices[ib]) {
      ++ia;
    } else if (a.retained_slices[ia] > b.retained_slices[ib]) {
      ++ib;
    } else {
      acc += row_dist2(a.row(ia), b.row(ib), a.M);
      ++n_common;
      ++ia;
      ++ib;
    }
  }
  if (n_common == 0) raise(errc::no_common_slices, "no slice retained in both embeddings");
  return std::sqrt(acc / static_cast<double>(n_common));
}

DistanceMatrix pairwise(const std::vector<SphericalPointCloud>& clouds, const SliceSet& slices,
                        std::int64_t M, double eps) {
  return pairwise_impl(clouds, slices, M, eps, true);
}

DistanceMatrix pairwise_serial(const std::vector<SphericalPointCloud>& clouds,
                               const SliceSet& slices, std::int64_t M, double eps) {
  return pairwise_impl(clouds, slices, M, eps, false);
}

DistanceMatrix pairwise_naive(const std::vector<SphericalPointCloud>& clouds,
                              const SliceSet& slices, std::int64_t M, double eps) {
  const std::size_t K = clouds.size();
  DistanceMatrix dm;
  dm.k = K;
  dm.data.assign(K * K, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = i + 1; j < K; ++j) pairs.emplace_back(i, j);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::int64_t p = 0; p < static_cast<std::int64_t>(pairs.size()); ++p) {
    const auto [i, j] = pairs[p];
    const LssotEmbedding ei = embed_impl(clouds[i], slices, M, eps, false);
    const LssotEmbedding ej = embed_impl(clouds[j], slices, M, eps, false);
    const double v = distance(ei, ej);
    dm.data[i * K + j] = v;
    dm.data[j * K + i] = v;
  }
  return dm;
}

double ssw_reference(const SphericalPointCloud& c1, const SphericalPointCloud& c2,
                     const SliceSet& slices, double eps, std::int64_t alpha_grid) {
  if (alpha_grid < 100) raise(errc::bad_config, "ssw_reference needs alpha_grid >= 100");
  if (c1.d != slices.d || c2.d != slices.d)
    raise(errc::dimension_mismatch, "cloud dimension differs from slices");
  const std::int64_t A = alpha_grid;
  const std::size_t L = slices.L;
  std::vector<double> costs(L, -1.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 2)
#endif
  for (std::int64_t l = 0; l < static_cast<std::int64_t>(L); ++l) {
    ProjectedSlice p1, p2;
    try {
      p1 = project(slices.u1(l), slices.u2(l), c1, eps);
      p2 = project(slices.u1(l), slices.u2(l), c2, eps);
    } catch (const error& e) {
      if (e.code() == errc::all_points_capped) continue;  // dropped slice
      throw;
    }
    const CircularMeasure m1 = from_points(p1.angles, p1.weights);
    const CircularMeasure m2 = from_points(p2.angles, p2.weights);
    std::vector<double> q1(A), q2(A);
    const double inv = 1.0 / static_cast<double>(A);
    for (std::int64_t k = 0; k < A; ++k) {
      const double x = (static_cast<double>(k) + 0.5) * inv;
      q1[k] = quantile(m1, x);
      q2[k] = quantile(m2, x);
    }
    costs[l] = ssw_slice_min_cost(q1, q2, A);
  }

  double acc = 0.0;
  std::size_t retained = 0;
  for (double c : costs) {
    if (c >= 0.0) {
      acc += c;
      ++retained;
    }
  }
  if (retained == 0) raise(errc::embedding_failed, "every slice dropped");
  return std::sqrt(acc / static_cast<double>(retained));
}

DistanceMatrix ssw_pairwise(const std::vector<SphericalPointCloud>& clouds,
                            const SliceSet& slices, double eps, std::int64_t alpha_grid) {
  const std::size_t K = clouds.size();
  DistanceMatrix dm;
  dm.k = K;
  dm.data.assign(K * K, 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = i + 1; j < K; ++j) pairs.emplace_back(i, j);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::int64_t p = 0; p < static_cast<std::int64_t>(pairs.size()); ++p) {
    const auto [i, j] = pairs[p];
    const double v = ssw_reference(clouds[i], clouds[j], slices, eps, alpha_grid);
    dm.data[i * K + j] = v;
    dm.data[j * K + i] = v;
  }
  return dm;
}

}  // namespace lssot
