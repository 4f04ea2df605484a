// Command-line driver: embeddings, pairwise distance matrices, gradient
// flows, generators, MDS, and the benchmark harness.
//
// Exit codes: 0 success, 1 data error (malformed inputs), 2 config error.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lssot/embedding.hpp"
#include "lssot/flow.hpp"
#include "lssot/io.hpp"
#include "lssot/sphere_stats.hpp"

namespace fs = std::filesystem;
using namespace lssot;

namespace {

constexpr int kExitData = 1;
constexpr int kExitConfig = 2;

int exit_code_for(const error& e) {
  switch (e.code()) {
    case errc::io_error:
    case errc::not_finite:
    case errc::negative_weight:
    case errc::empty_measure:
      return kExitData;
    default:
      return kExitConfig;
  }
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

using KV = std::vector<std::pair<std::string, std::string>>;

void write_sidecar(const std::string& out_path, const std::string& command, KV kv) {
  KV full;
  full.emplace_back("command", command);
  for (auto& p : kv) full.push_back(std::move(p));
  full.emplace_back("output", out_path);
  io::write_run_config(out_path + ".run", full);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

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

// Snapshot indices whose losses split [loss_first, loss_last] into
// near-equal decrements (first index reaching each level).
std::vector<std::size_t> loss_spaced_frames(const std::vector<double>& losses,
                                            std::size_t frames) {
  std::vector<std::size_t> out;
  if (frames == 0) return out;
  if (frames == 1) {
    out.push_back(losses.size() - 1);
    return out;
  }
  const double l0 = losses.front();
  const double l1 = losses.back();
  for (std::size_t f = 0; f < frames; ++f) {
    const double target =
        l0 + (l1 - l0) * static_cast<double>(f) / static_cast<double>(frames - 1);
    std::size_t pick = losses.size() - 1;
    for (std::size_t i = 0; i < losses.size(); ++i) {
      if ((l1 <= l0 && losses[i] <= target) || (l1 > l0 && losses[i] >= target)) {
        pick = i;
        break;
      }
    }
    out.push_back(pick);
  }
  out.front() = 0;
  out.back() = losses.size() - 1;
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Linear spherical sliced optimal transport toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap OpenMP parallelism (default: machine)");

  // ---- embed ----
  auto* embed_cmd = app.add_subcommand("embed", "embed a cloud file into the LSSOT space");
  std::string embed_in, embed_out = "embedding.lssot";
  std::uint64_t embed_seed = 1;
  std::int64_t embed_L = 500, embed_M = 1024;
  double embed_eps = 1e-6;
  embed_cmd->add_option("input", embed_in, "cloud CSV")->required();
  embed_cmd->add_option("-o,--out", embed_out, "output container");
  embed_cmd->add_option("--seed", embed_seed, "slice seed");
  embed_cmd->add_option("-L,--slices", embed_L, "number of slices")->check(CLI::PositiveNumber);
  embed_cmd->add_option("-M,--grid", embed_M, "reference grid size")->check(CLI::PositiveNumber);
  embed_cmd->add_option("--eps", embed_eps, "pole cap radius");

  // ---- pairwise ----
  auto* pw_cmd = app.add_subcommand("pairwise", "pairwise LSSOT distance matrix");
  std::vector<std::string> pw_in;
  std::string pw_out = "distances.csv";
  std::uint64_t pw_seed = 1;
  std::int64_t pw_L = 500, pw_M = 1024;
  double pw_eps = 1e-6;
  pw_cmd->add_option("inputs", pw_in, "cloud CSVs or embedding containers")
      ->required()
      ->expected(-2);
  pw_cmd->add_option("-o,--out", pw_out, "output CSV");
  pw_cmd->add_option("--seed", pw_seed, "slice seed");
  pw_cmd->add_option("-L,--slices", pw_L, "number of slices")->check(CLI::PositiveNumber);
  pw_cmd->add_option("-M,--grid", pw_M, "reference grid size")->check(CLI::PositiveNumber);
  pw_cmd->add_option("--eps", pw_eps, "pole cap radius");

  // ---- flow ----
  auto* flow_cmd = app.add_subcommand("flow", "gradient flow from source to target");
  std::string flow_src, flow_tgt, flow_out = "flow_out";
  std::int64_t flow_steps = 500, flow_M = 512, flow_frames = 5;
  std::int64_t flow_L = 200;
  double flow_lr = 50.0, flow_eps = 1e-6;
  std::uint64_t flow_seed = 1;
  std::string flow_mode = "riemannian";
  bool flow_reseed = false;
  flow_cmd->add_option("source", flow_src, "source cloud CSV")->required();
  flow_cmd->add_option("target", flow_tgt, "target cloud CSV")->required();
  flow_cmd->add_option("-o,--out", flow_out, "output directory");
  flow_cmd->add_option("--steps", flow_steps, "descent steps")->check(CLI::PositiveNumber);
  flow_cmd->add_option("--lr", flow_lr, "learning rate");
  flow_cmd->add_option("--mode", flow_mode, "riemannian | spherical")
      ->check(CLI::IsMember({"riemannian", "spherical"}));
  flow_cmd->add_option("--frames", flow_frames, "snapshots to export")
      ->check(CLI::PositiveNumber);
  flow_cmd->add_option("-L,--slices", flow_L, "gradient slices per step")
      ->check(CLI::PositiveNumber);
  flow_cmd->add_option("-M,--grid", flow_M, "reference grid size")->check(CLI::PositiveNumber);
  flow_cmd->add_option("--eps", flow_eps, "pole cap radius");
  flow_cmd->add_option("--seed", flow_seed, "slice seed");
  flow_cmd->add_flag("--reseed-each-step", flow_reseed, "fresh gradient slices per step");

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand("bench", "pairwise-computation benchmark harness");
  std::vector<std::int64_t> bench_n{1000}, bench_k{10};
  std::int64_t bench_L = 500, bench_M = 1024, bench_repeats = 3, bench_alpha = 200;
  std::uint64_t bench_seed = 1;
  std::string bench_out = "bench.csv";
  bool bench_skip_ssw = false;
  bench_cmd->add_option("--n-list", bench_n, "sample sizes");
  bench_cmd->add_option("--k-list", bench_k, "numbers of distributions");
  bench_cmd->add_option("-L,--slices", bench_L, "slices")->check(CLI::PositiveNumber);
  bench_cmd->add_option("-M,--grid", bench_M, "grid size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--repeats", bench_repeats, "repeats per cell")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--alpha-grid", bench_alpha, "ssw shift grid");
  bench_cmd->add_option("--seed", bench_seed, "cloud seed");
  bench_cmd->add_option("-o,--out", bench_out, "output CSV");
  bench_cmd->add_flag("--skip-ssw", bench_skip_ssw, "skip the ssw baseline column");

  // ---- vmf ----
  auto* vmf_cmd = app.add_subcommand("vmf", "sample a von Mises-Fisher cloud");
  double vmf_kappa = 30.0;
  std::int64_t vmf_n = 1000;
  std::uint64_t vmf_seed = 1;
  std::vector<double> vmf_mu{0.0, 0.0, 1.0};
  std::string vmf_out = "vmf.csv";
  vmf_cmd->add_option("--kappa", vmf_kappa, "concentration");
  vmf_cmd->add_option("-n,--n", vmf_n, "sample count")->check(CLI::PositiveNumber);
  vmf_cmd->add_option("--seed", vmf_seed, "rng seed");
  vmf_cmd->add_option("--mu", vmf_mu, "mean direction (3 numbers)")->expected(3);
  vmf_cmd->add_option("-o,--out", vmf_out, "output cloud CSV");

  // ---- fib ----
  auto* fib_cmd = app.add_subcommand("fib", "Fibonacci sphere points");
  std::int64_t fib_n = 20;
  std::string fib_out = "fib.csv";
  fib_cmd->add_option("-n,--n", fib_n, "point count")->check(CLI::PositiveNumber);
  fib_cmd->add_option("-o,--out", fib_out, "output cloud CSV");

  // ---- mds ----
  auto* mds_cmd = app.add_subcommand("mds", "classical MDS of a distance matrix");
  std::string mds_in, mds_out = "coords.csv";
  std::int64_t mds_p = 3;
  mds_cmd->add_option("input", mds_in, "distance matrix CSV")->required();
  mds_cmd->add_option("-p,--dims", mds_p, "embedding dimension")->check(CLI::PositiveNumber);
  mds_cmd->add_option("-o,--out", mds_out, "output coordinates CSV");

  CLI11_PARSE(app, argc, argv);
  apply_threads(threads);

  if (*embed_cmd) {
    const SphericalPointCloud cloud = io::read_cloud_csv(embed_in);
    const SliceSet slices =
        sample_slices(embed_seed, static_cast<std::uint32_t>(embed_L), cloud.d);
    const LssotEmbedding e = embed(cloud, slices, embed_M, embed_eps);
    io::write_embedding(embed_out, e, embed_eps);
    write_sidecar(embed_out, "embed",
                  {{"input", embed_in},
                   {"seed", std::to_string(embed_seed)},
                   {"L", std::to_string(embed_L)},
                   {"M", std::to_string(embed_M)},
                   {"d", std::to_string(cloud.d)},
                   {"eps", io::format_double(embed_eps)},
                   {"dropped", std::to_string(e.dropped_slices.size())},
                   {"threads", std::to_string(threads)}});
    std::cerr << "embedded " << cloud.size() << " points into " << e.retained_slices.size()
              << "x" << e.M << " (" << e.dropped_slices.size() << " slices dropped)\n";
    return 0;
  }

  if (*pw_cmd) {
    DistanceMatrix dm;
    bool any_embedding = false, any_cloud = false;
    for (const auto& p : pw_in) (io::is_embedding_file(p) ? any_embedding : any_cloud) = true;
    if (any_embedding && any_cloud)
      raise(errc::bad_config, "cannot mix cloud CSVs and embedding containers");

    if (any_embedding) {
      std::vector<LssotEmbedding> embs;
      embs.reserve(pw_in.size());
      for (const auto& p : pw_in) embs.push_back(io::read_embedding(p));
      for (std::size_t i = 1; i < embs.size(); ++i) {
        if (embs[i].slice_seed != embs[0].slice_seed || embs[i].L != embs[0].L ||
            embs[i].M != embs[0].M || embs[i].d != embs[0].d)
          raise(errc::slice_set_mismatch,
                "incompatible embeddings: " + pw_in[0] + " vs " + pw_in[i]);
      }
      const std::size_t K = embs.size();
      dm.k = K;
      dm.data.assign(K * K, 0.0);
      for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j) {
          const double v = distance(embs[i], embs[j]);
          dm.data[i * K + j] = v;
          dm.data[j * K + i] = v;
        }
    } else {
      std::vector<SphericalPointCloud> clouds;
      clouds.reserve(pw_in.size());
      for (const auto& p : pw_in) clouds.push_back(io::read_cloud_csv(p));
      for (std::size_t i = 1; i < clouds.size(); ++i)
        if (clouds[i].d != clouds[0].d)
          raise(errc::dimension_mismatch, "mixed dimensions: " + pw_in[0] + " (d=" +
                                              std::to_string(clouds[0].d) + ") vs " + pw_in[i] +
                                              " (d=" + std::to_string(clouds[i].d) + ")");
      const SliceSet slices =
          sample_slices(pw_seed, static_cast<std::uint32_t>(pw_L), clouds[0].d);
      dm = pairwise(clouds, slices, pw_M, pw_eps);
    }
    dm.labels.clear();
    for (const auto& p : pw_in) dm.labels.push_back(stem_of(p));
    io::write_distance_csv(pw_out, dm);
    KV kv{{"seed", std::to_string(pw_seed)},     {"L", std::to_string(pw_L)},
          {"M", std::to_string(pw_M)},           {"eps", io::format_double(pw_eps)},
          {"inputs", std::to_string(pw_in.size())}, {"threads", std::to_string(threads)}};
    write_sidecar(pw_out, "pairwise", kv);
    return 0;
  }

  if (*flow_cmd) {
    const SphericalPointCloud src = io::read_cloud_csv(flow_src);
    const SphericalPointCloud tgt = io::read_cloud_csv(flow_tgt);
    if (src.d != tgt.d)
      raise(errc::dimension_mismatch,
            "mixed dimensions: " + flow_src + " vs " + flow_tgt);
    FlowConfig cfg;
    cfg.steps = flow_steps;
    cfg.lr = flow_lr;
    cfg.mode = flow_mode == "riemannian" ? FlowMode::riemannian
                                         : FlowMode::spherical_coordinates;
    cfg.slices_per_step = static_cast<std::uint32_t>(flow_L);
    cfg.reseed_each_step = flow_reseed;
    cfg.eps = flow_eps;
    cfg.M = flow_M;
    const FlowTrajectory traj = run_flow(src, tgt, cfg, flow_seed);

    fs::create_directories(flow_out);
    io::write_loss_csv((fs::path(flow_out) / "losses.csv").string(), traj.losses);
    const auto picks = loss_spaced_frames(traj.losses, static_cast<std::size_t>(flow_frames));
    for (std::size_t f = 0; f < picks.size(); ++f) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%02zu.csv", f);
      io::write_cloud_csv((fs::path(flow_out) / name).string(), traj.snapshots[picks[f]]);
    }
    write_sidecar((fs::path(flow_out) / "flow").string(), "flow",
                  {{"source", flow_src},
                   {"target", flow_tgt},
                   {"steps", std::to_string(flow_steps)},
                   {"lr", io::format_double(flow_lr)},
                   {"mode", flow_mode},
                   {"frames", std::to_string(flow_frames)},
                   {"L", std::to_string(flow_L)},
                   {"M", std::to_string(flow_M)},
                   {"eps", io::format_double(flow_eps)},
                   {"seed", std::to_string(flow_seed)},
                   {"reseed_each_step", flow_reseed ? "1" : "0"},
                   {"threads", std::to_string(threads)}});
    std::cerr << "flow: loss " << traj.losses.front() << " -> " << traj.losses.back() << "\n";
    return 0;
  }

  if (*bench_cmd) {
    std::ofstream out(bench_out, std::ios::binary);
    if (!out) raise(errc::io_error, "cannot write " + bench_out);
    out << "n,k,repeat,embed_once_ms,naive_ms,ssw_ms\n";
    for (std::int64_t n : bench_n) {
      for (std::int64_t k : bench_k) {
        std::vector<SphericalPointCloud> clouds;
        for (std::int64_t i = 0; i < k; ++i)
          clouds.push_back(random_cloud(bench_seed + 1000 * i + 7, n, 3));
        const SliceSet slices =
            sample_slices(bench_seed, static_cast<std::uint32_t>(bench_L), 3);
        std::vector<double> t_once, t_naive, t_ssw;
        for (std::int64_t rep = 0; rep < bench_repeats; ++rep) {
          t_once.push_back(wall_ms([&] { pairwise(clouds, slices, bench_M, 1e-6); }));
          t_naive.push_back(wall_ms([&] { pairwise_naive(clouds, slices, bench_M, 1e-6); }));
          if (!bench_skip_ssw)
            t_ssw.push_back(wall_ms([&] { ssw_pairwise(clouds, slices, 1e-6, bench_alpha); }));
          else
            t_ssw.push_back(0.0);
          out << n << "," << k << "," << rep << "," << io::format_double(t_once.back()) << ","
              << io::format_double(t_naive.back()) << "," << io::format_double(t_ssw.back())
              << "\n";
        }
        out << n << "," << k << ",median," << io::format_double(median(t_once)) << ","
            << io::format_double(median(t_naive)) << "," << io::format_double(median(t_ssw))
            << "\n";
      }
    }
    write_sidecar(bench_out, "bench",
                  {{"seed", std::to_string(bench_seed)},
                   {"L", std::to_string(bench_L)},
                   {"M", std::to_string(bench_M)},
                   {"repeats", std::to_string(bench_repeats)},
                   {"alpha_grid", std::to_string(bench_alpha)},
                   {"threads", std::to_string(threads)}});
    return 0;
  }

  if (*vmf_cmd) {
    VmfParams params;
    params.kappa = vmf_kappa;
    params.mu = {vmf_mu[0], vmf_mu[1], vmf_mu[2]};
    const double nn = std::sqrt(params.mu[0] * params.mu[0] + params.mu[1] * params.mu[1] +
                                params.mu[2] * params.mu[2]);
    if (nn <= 0.0) raise(errc::bad_config, "mu must be nonzero");
    for (double& c : params.mu) c /= nn;
    const SphericalPointCloud cloud = vmf_sample(params, vmf_n, vmf_seed);
    io::write_cloud_csv(vmf_out, cloud);
    write_sidecar(vmf_out, "vmf",
                  {{"kappa", io::format_double(vmf_kappa)},
                   {"n", std::to_string(vmf_n)},
                   {"seed", std::to_string(vmf_seed)},
                   {"mu", io::format_double(params.mu[0]) + " " +
                              io::format_double(params.mu[1]) + " " +
                              io::format_double(params.mu[2])},
                   {"threads", std::to_string(threads)}});
    return 0;
  }

  if (*fib_cmd) {
    const auto pts = fibonacci_sphere(fib_n);
    std::vector<double> flat;
    flat.reserve(pts.size() * 3);
    for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
    io::write_cloud_csv(fib_out, make_cloud(flat, 3));
    write_sidecar(fib_out, "fib",
                  {{"n", std::to_string(fib_n)}, {"threads", std::to_string(threads)}});
    return 0;
  }

  if (*mds_cmd) {
    const DistanceMatrix dm = io::read_distance_csv(mds_in);
    const EmbeddingResult res = classical_mds(dm, static_cast<std::size_t>(mds_p));
    io::write_coords_csv(mds_out, res.coordinates, res.k, res.p);
    KV kv{{"input", mds_in}, {"p", std::to_string(mds_p)}, {"threads", std::to_string(threads)}};
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
      kv.emplace_back("eigenvalue_" + std::to_string(i), io::format_double(res.eigenvalues[i]));
    write_sidecar(mds_out, "mds", kv);
    return 0;
  }

  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
