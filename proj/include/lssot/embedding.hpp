#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lssot/circle.hpp"
#include "lssot/slicer.hpp"

namespace lssot {

// L'-by-M matrix of circular displacement values, one row per retained slice,
// tagged with the slice provenance needed to compare embeddings.
struct LssotEmbedding {
  std::vector<double> rows;                  // retained_slices.size() * M, row-major
  std::vector<std::uint32_t> retained_slices;
  std::vector<std::uint32_t> dropped_slices;
  std::uint64_t slice_seed = 0;
  std::uint32_t L = 0;
  std::uint32_t M = 0;
  std::uint32_t d = 0;

  const double* row(std::size_t r) const { return rows.data() + r * M; }
};

// Symmetric K-by-K matrix with zero diagonal.
struct DistanceMatrix {
  std::size_t k = 0;
  std::vector<std::string> labels;
  std::vector<double> data;  // k*k row-major

  double at(std::size_t i, std::size_t j) const { return data[i * k + j]; }
};

// Per-slice projection + LCOT embedding, stacked.  Slices where every point
// is capped are dropped and recorded.  For d == 2 every slice is evaluated in
// the canonical chart, where the embedding is chart-independent, so all rows
// coincide with the plain LCOT embedding of the circular measure.
LssotEmbedding embed(const SphericalPointCloud& cloud, const SliceSet& slices, std::int64_t M,
                     double eps);
LssotEmbedding embed_serial(const SphericalPointCloud& cloud, const SliceSet& slices,
                            std::int64_t M, double eps);

// Root-mean over common retained slices of squared per-slice LCOT distances.
double distance(const LssotEmbedding& a, const LssotEmbedding& b);

// K embeddings computed once, then K(K-1)/2 row comparisons.
DistanceMatrix pairwise(const std::vector<SphericalPointCloud>& clouds, const SliceSet& slices,
                        std::int64_t M, double eps);
DistanceMatrix pairwise_serial(const std::vector<SphericalPointCloud>& clouds,
                               const SliceSet& slices, std::int64_t M, double eps);

// Benchmark baseline: re-embeds both clouds for every pair.
DistanceMatrix pairwise_naive(const std::vector<SphericalPointCloud>& clouds,
                              const SliceSet& slices, std::int64_t M, double eps);

// Reference SSW discrepancy: per-slice COT_2 minimized over a shift grid of
// alpha_grid points (midpoint quadrature on the same grid), root-mean over
// slices.  A slow validation baseline.
double ssw_reference(const SphericalPointCloud& c1, const SphericalPointCloud& c2,
                     const SliceSet& slices, double eps, std::int64_t alpha_grid);

DistanceMatrix ssw_pairwise(const std::vector<SphericalPointCloud>& clouds,
                            const SliceSet& slices, double eps, std::int64_t alpha_grid);

}  // namespace lssot
