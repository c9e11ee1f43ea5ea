// Batch front end: cluster / communities / evaluate / bench / sweep-alpha.
// Every run writes plot-ready tabular output; errors leave a machine-readable
// record on stderr and a nonzero exit status.
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rsclust/group_average.hpp"
#include "rsclust/hierarchy.hpp"
#include "rsclust/io.hpp"
#include "rsclust/metrics.hpp"
#include "rsclust/netcluster.hpp"

namespace fs = std::filesystem;
using namespace rsclust;

namespace {

struct CommonOpts {
  double alpha = 1.5;
  std::uint64_t seed = 0;
  double jitter_scale = 1e-9;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--alpha", opts.alpha, "Pruning base (> 1)")
      ->default_val(1.5);
  cmd->add_option("--seed", opts.seed, "RNG seed")->default_val(0);
  cmd->add_option("--jitter-scale", opts.jitter_scale,
                  "Relative tie-breaking perturbation")
      ->default_val(1e-9);
  cmd->add_option("--out-dir", opts.out_dir, "Output directory")
      ->default_val(".");
}

RsConfig to_config(const CommonOpts& opts, Mode mode) {
  RsConfig cfg;
  cfg.alpha = opts.alpha;
  cfg.seed = opts.seed;
  cfg.jitter = {opts.seed, opts.jitter_scale};
  cfg.mode = mode;
  return cfg;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

Partition labels_partition(const PointSet& ps) {
  std::vector<std::uint32_t> raw;
  for (int label : *ps.labels())
    raw.push_back(static_cast<std::uint32_t>(label));
  return make_partition(std::move(raw));
}

double time_call(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --- cluster ---------------------------------------------------------------

int run_cluster(const std::string& input, std::optional<int> label_col,
                const CommonOpts& opts, Mode mode, bool newick,
                std::optional<int> max_iterations) {
  fs::create_directories(opts.out_dir);
  RsConfig cfg = to_config(opts, mode);
  cfg.max_iterations = max_iterations;

  Dendrogram dend;
  std::optional<Partition> truth;
  if (mode == Mode::metric_only) {
    const auto oracle = load_distance_matrix(input);
    dend = cluster_metric(*oracle, cfg);
  } else {
    const auto ps = std::make_shared<PointSet>(load_points(input, label_col));
    if (ps->labels()) truth = labels_partition(*ps);
    dend = cluster_points(*ps, cfg);
  }

  const fs::path dir(opts.out_dir);
  open_out(dir / "dendrogram.json") << dendrogram_to_json(dend) << "\n";
  if (newick)
    open_out(dir / "dendrogram.newick") << dendrogram_to_newick(dend) << "\n";

  auto table = open_out(dir / "iterations.csv");
  table << "iteration,k" << (truth ? ",rand_index" : "") << "\n";
  for (int t = 0; t <= dend.iterations; ++t) {
    const auto p = partition_at_iteration(dend, t);
    std::ostringstream name;
    name << "partition_iter_" << t << ".csv";
    write_partition_csv((dir / name.str()).string(), p);
    table << t << "," << p.k;
    if (truth) table << "," << rand_index(p, *truth);
    table << "\n";
  }
  return 0;
}

// --- communities -----------------------------------------------------------

void write_tpr_series(const fs::path& path, const Graph& g,
                      const std::vector<Partition>& series) {
  auto out = open_out(path);
  out << "k,tpr\n";
  for (const auto& p : series) out << p.k << "," << tpr(g, p) << "\n";
}

int run_communities(const std::string& input, const CommonOpts& opts,
                    bool weighted) {
  fs::create_directories(opts.out_dir);
  auto loaded = load_graph(input);
  if (loaded.duplicates > 0)
    std::cerr << "warning: collapsed " << loaded.duplicates
              << " duplicate edge(s), first weight kept\n";
  Graph graph = loaded.graph;
  if (!weighted) {
    std::vector<Edge> unit = graph.edges();
    for (auto& e : unit) e.w = 1.0;
    graph = Graph(graph.n(), std::move(unit));
  }

  const fs::path dir(opts.out_dir);
  const RsConfig cfg = to_config(opts, Mode::metric_only);
  const Partition rs = detect_communities(graph, cfg);
  write_partition_csv((dir / "rs_partition.csv").string(), rs, &loaded.names);

  const auto scan = resolution_scan(graph, rs);
  {
    auto out = open_out(dir / "rs_scan.csv");
    out << "step,merged_u,merged_v,k\n";
    out << 0 << ",,," << scan.initial.k << "\n";
    for (std::size_t s = 0; s < scan.merges.size(); ++s) {
      const auto& [edge, p] = scan.merges[s];
      out << s + 1 << "," << loaded.names[edge.u] << ","
          << loaded.names[edge.v] << "," << p.k << "\n";
    }
  }
  std::vector<Partition> rs_series{scan.initial};
  for (const auto& [edge, p] : scan.merges) rs_series.push_back(p);
  write_tpr_series(dir / "rs_tpr.csv", graph, rs_series);

  const auto gn = girvan_newman(graph);
  {
    auto out = open_out(dir / "gn_removals.csv");
    out << "step,u,v\n";
    for (std::size_t s = 0; s < gn.removals.size(); ++s)
      out << s + 1 << "," << loaded.names[gn.removals[s].u] << ","
          << loaded.names[gn.removals[s].v] << "\n";
  }
  write_tpr_series(dir / "gn_tpr.csv", graph, gn.partitions);
  return 0;
}

// --- evaluate --------------------------------------------------------------

int run_evaluate(const std::string& file_a, const std::string& file_b,
                 const std::string& graph_file) {
  const auto [pa, pb] =
      align_partitions(read_partition_csv(file_a), read_partition_csv(file_b));
  nlohmann::json report;
  report["rand_index"] = rand_index(pa, pb);
  report["k_a"] = pa.k;
  report["k_b"] = pb.k;
  if (!graph_file.empty()) {
    const auto loaded = load_graph(graph_file);
    if (loaded.graph.n() != pa.size())
      throw MismatchedEntities("evaluate: graph and partitions disagree on n");
    report["tpr_a"] = tpr(loaded.graph, pa);
    report["tpr_b"] = tpr(loaded.graph, pb);
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}

// --- bench -----------------------------------------------------------------

int run_bench(const std::vector<std::size_t>& sizes, const CommonOpts& opts) {
  fs::create_directories(opts.out_dir);
  auto out = open_out(fs::path(opts.out_dir) / "bench.csv");
  out << "algorithm,n,seconds\n";
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (std::size_t n : sizes) {
    std::vector<double> coords(n * 2);
    for (auto& c : coords) c = coord(rng);
    const auto ps = std::make_shared<PointSet>(std::move(coords), 2);
    const RsConfig cfg = to_config(opts, Mode::coordinate);
    out << "rs," << n << ","
        << time_call([&] { cluster_points(*ps, cfg); }) << "\n";
    const auto oracle = euclidean_oracle(ps);
    out << "group_average," << n << ","
        << time_call([&] { group_average_merges(*oracle); }) << "\n";
  }
  return 0;
}

// --- sweep-alpha -----------------------------------------------------------

std::vector<double> parse_grid(const std::string& spec) {
  // "start:stop:step"
  const auto first = spec.find(':');
  const auto second = spec.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw Error("sweep-alpha: grid must be start:stop:step");
  const double start = std::stod(spec.substr(0, first));
  const double stop = std::stod(spec.substr(first + 1, second - first - 1));
  const double step = std::stod(spec.substr(second + 1));
  if (!(step > 0.0) || stop < start)
    throw Error("sweep-alpha: bad grid bounds");
  std::vector<double> grid;
  for (double a = start; a <= stop + step / 2; a += step) grid.push_back(a);
  return grid;
}

int run_sweep(const std::string& input, std::optional<int> label_col,
              const std::string& grid_spec, const CommonOpts& opts) {
  fs::create_directories(opts.out_dir);
  const auto ps = std::make_shared<PointSet>(load_points(input, label_col));
  if (!ps->labels())
    throw Error("sweep-alpha: a label column is required to score runs");
  const Partition truth = labels_partition(*ps);

  auto out = open_out(fs::path(opts.out_dir) / "alpha_sweep.csv");
  out << "alpha,best_rand_index,best_iteration,best_k\n";
  for (double alpha : parse_grid(grid_spec)) {
    CommonOpts local = opts;
    local.alpha = alpha;
    const auto dend = cluster_points(*ps, to_config(local, Mode::coordinate));
    double best = -1.0;
    int best_t = 0;
    std::uint32_t best_k = static_cast<std::uint32_t>(ps->size());
    for (int t = 1; t <= dend.iterations; ++t) {
      const auto p = partition_at_iteration(dend, t);
      const double ri = rand_index(p, truth);
      if (ri > best) {
        best = ri;
        best_t = t;
        best_k = p.k;
      }
    }
    out << alpha << "," << best << "," << best_t << "," << best_k << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RS hierarchical clustering toolkit"};
  app.require_subcommand(1);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Hierarchical clustering");
  std::string cl_input;
  int cl_label_col = std::numeric_limits<int>::min();
  std::string cl_mode = "coordinate";
  bool cl_newick = false;
  int cl_max_iter = 0;
  CommonOpts cl_opts;
  cluster->add_option("input", cl_input, "Points CSV (or distance matrix CSV)")
      ->required();
  cluster->add_option("--label-col", cl_label_col,
                      "Ground-truth label column (-1 = last)");
  cluster->add_option("--mode", cl_mode, "coordinate | metric")
      ->check(CLI::IsMember({"coordinate", "metric"}));
  cluster->add_flag("--newick", cl_newick, "Also emit Newick");
  cluster->add_option("--max-iterations", cl_max_iter, "Iteration cap");
  add_common(cluster, cl_opts);

  // communities
  auto* communities = app.add_subcommand("communities", "Graph communities");
  std::string co_input;
  bool co_weighted = false;
  CommonOpts co_opts;
  communities->add_option("input", co_input, "Edge list: u v [w]")->required();
  communities->add_flag("--weighted", co_weighted, "Honor edge weights");
  add_common(communities, co_opts);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Compare two partitions");
  std::string ev_a, ev_b, ev_graph;
  evaluate->add_option("partition_a", ev_a, "Partition CSV")->required();
  evaluate->add_option("partition_b", ev_b, "Partition CSV")->required();
  evaluate->add_option("--graph", ev_graph, "Edge list for TPR");

  // bench
  auto* bench = app.add_subcommand("bench", "Time RS vs group average");
  std::vector<std::size_t> be_sizes{1000, 2000, 4000};
  CommonOpts be_opts;
  bench->add_option("--sizes", be_sizes, "Point counts")->delimiter(',');
  add_common(bench, be_opts);

  // sweep-alpha
  auto* sweep = app.add_subcommand("sweep-alpha", "Best Rand Index per alpha");
  std::string sw_input, sw_grid = "1.1:3.0:0.1";
  int sw_label_col = -1;
  CommonOpts sw_opts;
  sweep->add_option("input", sw_input, "Labeled points CSV")->required();
  sweep->add_option("--grid", sw_grid, "start:stop:step");
  sweep->add_option("--label-col", sw_label_col,
                    "Ground-truth label column (-1 = last)");
  add_common(sweep, sw_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cluster) {
      std::optional<int> label_col;
      if (cl_label_col != std::numeric_limits<int>::min())
        label_col = cl_label_col;
      std::optional<int> max_iter;
      if (cl_max_iter > 0) max_iter = cl_max_iter;
      return run_cluster(cl_input, label_col, cl_opts,
                         cl_mode == "metric" ? Mode::metric_only
                                             : Mode::coordinate,
                         cl_newick, max_iter);
    }
    if (*communities) return run_communities(co_input, co_opts, co_weighted);
    if (*evaluate) return run_evaluate(ev_a, ev_b, ev_graph);
    if (*bench) return run_bench(be_sizes, be_opts);
    if (*sweep) return run_sweep(sw_input, sw_label_col, sw_grid, sw_opts);
  } catch (const std::exception& e) {
    nlohmann::json record;
    record["error"] = e.what();
    std::cerr << record.dump() << "\n";
    return 1;
  }
  return 0;
}
