#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lssot/embedding.hpp"
#include "lssot/slicer.hpp"

namespace lssot::io {

// Cloud CSV: header "x1,..,xd[,weight]", one row per point.  Points must be
// unit within 1e-6 (then renormalized exactly); malformed rows raise io_error
// with the offending row/column in the message.
SphericalPointCloud read_cloud_csv(const std::string& path);
void write_cloud_csv(const std::string& path, const SphericalPointCloud& cloud);

// Embedding container: 16-byte magic, version byte, header fields, then
// row-major 64-bit floats, little-endian.
void write_embedding(const std::string& path, const LssotEmbedding& e, double eps);
LssotEmbedding read_embedding(const std::string& path, double* eps_out = nullptr);
bool is_embedding_file(const std::string& path);

// Distance matrix CSV with a label header row and label column.
void write_distance_csv(const std::string& path, const DistanceMatrix& dm);
DistanceMatrix read_distance_csv(const std::string& path);

// Loss CSV: "step,loss".
void write_loss_csv(const std::string& path, const std::vector<double>& losses);

// Coordinates CSV: header "c1,..,cp".
void write_coords_csv(const std::string& path, const std::vector<double>& coords, std::size_t k,
                      std::size_t p);

// RunConfig sidecar: key=value lines, written next to every command output.
void write_run_config(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& kv);

std::string format_double(double v);

}  // namespace lssot::io
