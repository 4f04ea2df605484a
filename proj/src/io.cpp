#include "lssot/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lssot::io {

namespace {

constexpr char kMagic[16] = {'L', 'S', 'S', 'O', 'T', 'E', 'M', 'B',
                             'E', 'D', 'D', 'I', 'N', 'G', '\0', '\0'};
constexpr std::uint8_t kVersion = 1;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, std::size_t row, std::size_t col) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    raise(errc::io_error, "row " + std::to_string(row) + ", column " + std::to_string(col) +
                              ": cannot parse '" + s + "' as a number");
  }
}

template <typename T>
void write_raw(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) raise(errc::io_error, "truncated embedding file");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SphericalPointCloud read_cloud_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(errc::io_error, "cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) raise(errc::io_error, path + ": empty file");

  const auto header = split_csv_line(line);
  std::uint32_t d = 0;
  bool has_weight = false;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string expected = "x" + std::to_string(i + 1);
    if (header[i] == expected) {
      d = static_cast<std::uint32_t>(i + 1);
    } else if (header[i] == "weight" && i == header.size() - 1 && i == d) {
      has_weight = true;
    } else {
      raise(errc::io_error, path + ": bad header column " + std::to_string(i + 1) + " ('" +
                                header[i] + "'), expected x1..xd[,weight]");
    }
  }
  if (d < 2) raise(errc::io_error, path + ": need at least columns x1,x2");

  std::vector<double> pts;
  std::vector<double> weights;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      raise(errc::io_error,
            path + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                " columns, expected " + std::to_string(header.size()));
    for (std::uint32_t c = 0; c < d; ++c) pts.push_back(parse_double(cells[c], row, c + 1));
    if (has_weight) weights.push_back(parse_double(cells[d], row, d + 1));
  }
  if (pts.empty()) raise(errc::io_error, path + ": no data rows");

  // Unit-norm validation with a row-numbered message.
  const std::size_t n = pts.size() / d;
  for (std::size_t i = 0; i < n; ++i) {
    double nn = 0.0;
    for (std::uint32_t c = 0; c < d; ++c) nn += pts[i * d + c] * pts[i * d + c];
    nn = std::sqrt(nn);
    if (!std::isfinite(nn) || std::abs(nn - 1.0) > 1e-6)
      raise(errc::io_error, path + ": row " + std::to_string(i + 2) + " has norm " +
                                format_double(nn) + ", expected 1 within 1e-6");
  }
  return make_cloud(pts, d, weights);
}

void write_cloud_csv(const std::string& path, const SphericalPointCloud& cloud) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(errc::io_error, "cannot write " + path);
  for (std::uint32_t c = 0; c < cloud.d; ++c) f << (c ? "," : "") << "x" << (c + 1);
  f << ",weight\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double* p = cloud.point(i);
    for (std::uint32_t c = 0; c < cloud.d; ++c) f << (c ? "," : "") << format_double(p[c]);
    f << "," << format_double(cloud.weights[i]) << "\n";
  }
}

void write_embedding(const std::string& path, const LssotEmbedding& e, double eps) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(errc::io_error, "cannot write " + path);
  f.write(kMagic, sizeof(kMagic));
  write_raw(f, kVersion);
  write_raw(f, e.slice_seed);
  write_raw(f, e.L);
  write_raw(f, e.M);
  write_raw(f, e.d);
  write_raw(f, eps);
  write_raw(f, static_cast<std::uint32_t>(e.dropped_slices.size()));
  for (std::uint32_t s : e.dropped_slices) write_raw(f, s);
  write_raw(f, static_cast<std::uint32_t>(e.retained_slices.size()));
  for (std::uint32_t s : e.retained_slices) write_raw(f, s);
  f.write(reinterpret_cast<const char*>(e.rows.data()),
          static_cast<std::streamsize>(e.rows.size() * sizeof(double)));
  if (!f) raise(errc::io_error, "write failed for " + path);
}

bool is_embedding_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  char magic[16];
  f.read(magic, sizeof(magic));
  return f && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0;
}

LssotEmbedding read_embedding(const std::string& path, double* eps_out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) raise(errc::io_error, "cannot open " + path);
  char magic[16];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    raise(errc::io_error, path + ": not an embedding container");
  const auto version = read_raw<std::uint8_t>(f);
  if (version != kVersion)
    raise(errc::io_error, path + ": unsupported container version " + std::to_string(version));
  LssotEmbedding e;
  e.slice_seed = read_raw<std::uint64_t>(f);
  e.L = read_raw<std::uint32_t>(f);
  e.M = read_raw<std::uint32_t>(f);
  e.d = read_raw<std::uint32_t>(f);
  const double eps = read_raw<double>(f);
  if (eps_out) *eps_out = eps;
  const auto ndropped = read_raw<std::uint32_t>(f);
  e.dropped_slices.resize(ndropped);
  for (auto& s : e.dropped_slices) s = read_raw<std::uint32_t>(f);
  const auto nretained = read_raw<std::uint32_t>(f);
  e.retained_slices.resize(nretained);
  for (auto& s : e.retained_slices) s = read_raw<std::uint32_t>(f);
  e.rows.resize(static_cast<std::size_t>(nretained) * e.M);
  f.read(reinterpret_cast<char*>(e.rows.data()),
         static_cast<std::streamsize>(e.rows.size() * sizeof(double)));
  if (!f) raise(errc::io_error, path + ": truncated embedding rows");
  return e;
}

void write_distance_csv(const std::string& path, const DistanceMatrix& dm) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(errc::io_error, "cannot write " + path);
  f << "label";
  for (std::size_t j = 0; j < dm.k; ++j)
    f << "," << (j < dm.labels.size() ? dm.labels[j] : "c" + std::to_string(j));
  f << "\n";
  for (std::size_t i = 0; i < dm.k; ++i) {
    f << (i < dm.labels.size() ? dm.labels[i] : "c" + std::to_string(i));
    for (std::size_t j = 0; j < dm.k; ++j) f << "," << format_double(dm.at(i, j));
    f << "\n";
  }
}

DistanceMatrix read_distance_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) raise(errc::io_error, "cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) raise(errc::io_error, path + ": empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "label")
    raise(errc::io_error, path + ": expected 'label,...' header");
  DistanceMatrix dm;
  dm.k = header.size() - 1;
  dm.labels.assign(header.begin() + 1, header.end());
  dm.data.assign(dm.k * dm.k, 0.0);
  std::size_t row = 1;
  for (std::size_t i = 0; i < dm.k; ++i) {
    if (!std::getline(f, line)) raise(errc::io_error, path + ": missing matrix rows");
    ++row;
    const auto cells = split_csv_line(line);
    if (cells.size() != dm.k + 1)
      raise(errc::io_error, path + ": row " + std::to_string(row) + " has wrong arity");
    for (std::size_t j = 0; j < dm.k; ++j)
      dm.data[i * dm.k + j] = parse_double(cells[j + 1], row, j + 2);
  }
  return dm;
}

void write_loss_csv(const std::string& path, const std::vector<double>& losses) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(errc::io_error, "cannot write " + path);
  f << "step,loss\n";
  for (std::size_t i = 0; i < losses.size(); ++i)
    f << i << "," << format_double(losses[i]) << "\n";
}

void write_coords_csv(const std::string& path, const std::vector<double>& coords, std::size_t k,
                      std::size_t p) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(errc::io_error, "cannot write " + path);
  for (std::size_t c = 0; c < p; ++c) f << (c ? "," : "") << "c" << (c + 1);
  f << "\n";
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < p; ++c) f << (c ? "," : "") << format_double(coords[i * p + c]);
    f << "\n";
  }
}

void write_run_config(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(errc::io_error, "cannot write " + path);
  for (const auto& [k, v] : kv) f << k << "=" << v << "\n";
}

}  // namespace lssot::io
