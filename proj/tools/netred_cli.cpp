// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0
//
// netred: structure-preserving reduction of diffusively coupled networks.
//
// Exit codes: 0 success, 2 unreadable/invalid model, 3 method preconditions
// infeasible, 4 numerical failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "netred/io.hpp"
#include "netred/netred.hpp"

namespace fs = std::filesystem;
using namespace netred;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitModel = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

struct Options {
  std::string model_path;
  std::string second_path;
  std::string partition_path;
  std::string output;
  std::string linkage = "average";
  std::string method;
  std::string norm = "h2";
  int order = -1;
  int sub_order = -1;
  double gamma = 0.5;
  double lambda = 0.0;
  bool lambda_set = false;
  int threads = 1;
};

struct LoadedModel {
  io::ModelFile file;
  std::string digest;
};

LoadedModel load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInputError("cannot read " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  io::json j;
  try {
    j = io::json::parse(buf.str());
  } catch (const io::json::exception& e) {
    throw InvalidInputError("json parse failed: " + std::string(e.what()));
  }
  LoadedModel m{io::model_from_json(j), io::digest(buf.str())};
  m.file.net.validate();
  return m;
}

Clustering load_partition(const std::string& path, int n) {
  const Clustering c = io::clustering_from_json(io::load_json(path));
  if (c.size() != n)
    throw InvalidInputError("partition covers " + std::to_string(c.size()) +
                            " vertices, model has " + std::to_string(n));
  return c;
}

Linkage parse_linkage(const std::string& name) {
  if (name == "average") return Linkage::Average;
  if (name == "single") return Linkage::Single;
  if (name == "complete") return Linkage::Complete;
  throw InvalidInputError("unknown linkage: " + name);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    io::atomic_write(path, content);
}

fs::path sibling(const std::string& output, const char* suffix) {
  fs::path p(output);
  return p.parent_path() / (p.stem().string() + suffix);
}

void write_reduction_outputs(const Options& opt, const LoadedModel& in,
                             const ReductionReport& rep, double seconds,
                             const io::json& extra = {}) {
  io::json report = io::report_to_json(rep, in.digest, seconds);
  for (auto it = extra.begin(); it != extra.end(); ++it) report[it.key()] = it.value();

  const LaplacianCheck chk = check_laplacian(rep.reduced.L);
  io::ModelFile out;
  out.net = rep.reduced;
  out.graph = chk.graph;
  if (!chk.valid) throw NumericalError("reduced model is not a valid network");

  if (opt.output.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  io::atomic_write(opt.output, io::model_to_json(out).dump(2) + "\n");
  io::atomic_write(sibling(opt.output, ".report.json"), report.dump(2) + "\n");
  std::cout << "wrote " << opt.output << " and "
            << sibling(opt.output, ".report.json").string() << "\n";
}

int cmd_check(const Options& opt) {
  LoadedModel m;
  bool model_ok = true;
  std::string why;
  try {
    m = load_model(opt.model_path);
  } catch (const std::exception& e) {
    model_ok = false;
    why = e.what();
  }
  if (!model_ok) {
    std::cout << "model: invalid (" << why << ")\n";
    return kExitModel;
  }
  const NetworkSystem& net = m.file.net;
  const LaplacianCheck chk = check_laplacian(net.L);
  std::cout << "laplacian valid: " << (chk.valid ? "true" : "false") << "\n";
  std::cout << "connected: " << (chk.connected ? "true" : "false")
            << " (lambda_2 = " << chk.lambda2 << ")\n";
  const Semistability ss = semistability_check(assemble(net).A);
  std::cout << "semistable: " << (ss.semistable ? "true" : "false") << "\n";
  const SynchronizationVerdict sync = check_synchronization(net);
  std::cout << "synchronized: " << (sync.synchronized ? "true" : "false")
            << " (worst abscissa " << sync.worst_abscissa << ")\n";
  if (net.single_integrator()) {
    std::cout << "subsystem: single integrator (passive)\n";
  } else {
    try {
      passivity_certificate(*net.subsystem, PassivityMode::SymmetricCase);
      std::cout << "subsystem: passive (symmetric case, K = I)\n";
    } catch (const std::exception& e) {
      std::cout << "subsystem: no symmetric-case certificate (" << e.what() << ")\n";
    }
  }
  return kExitOk;
}

int cmd_dissim(const Options& opt) {
  const LoadedModel m = load_model(opt.model_path);
  const Matrix D =
      dissimilarity_matrix(m.file.net, DissimilarityRoute::Auto, opt.threads);
  emit(opt.output, io::dissimilarity_csv(D));
  return kExitOk;
}

int cmd_cluster(const Options& opt) {
  const LoadedModel m = load_model(opt.model_path);
  const auto t0 = std::chrono::steady_clock::now();
  io::json extra;
  Clustering chosen;
  if (!opt.partition_path.empty()) {
    chosen = load_partition(opt.partition_path, m.file.graph.order());
  } else {
    if (opt.order < 1)
      throw InvalidInputError("cluster: -r/--order or --partition required");
    const Matrix D =
        dissimilarity_matrix(m.file.net, DissimilarityRoute::Auto, opt.threads);
    const HierarchicalResult hier =
        hierarchical_cluster(D, opt.order, parse_linkage(opt.linkage));
    chosen = hier.clustering;
    extra["dendrogram"] = io::dendrogram_to_json(hier.merges);
  }
  ReductionReport rep = reduce_by_clustering(m.file.net, chosen);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_reduction_outputs(opt, m, rep, secs, extra);
  return kExitOk;
}

int cmd_aep(const Options& opt) {
  const LoadedModel m = load_model(opt.model_path);
  if (opt.partition_path.empty()) throw InvalidInputError("aep: --partition required");
  const Clustering c = load_partition(opt.partition_path, m.file.graph.order());
  const AepVerdict v = is_almost_equitable(m.file.graph, c);
  std::cout << "almost equitable: " << (v.is_aep ? "true" : "false")
            << " (worst violation " << v.worst_violation << ")\n";
  if (!v.is_aep) return kExitInfeasible;
  // leaders from the binary input matrix
  std::vector<int> leaders;
  for (Index j = 0; j < m.file.net.F.cols(); ++j)
    for (Index i = 0; i < m.file.net.F.rows(); ++i)
      if (m.file.net.F(i, j) != 0.0) leaders.push_back(static_cast<int>(i) + 1);
  const AepH2Result h2 = aep_h2_error(m.file.graph, c, leaders);
  const AepHinfResult hi = aep_hinf_error(m.file.graph, c, leaders);
  std::cout << "h2 relative error (formula): " << h2.formula << "\n";
  std::cout << "h2 relative error (direct):  " << h2.direct << "\n";
  std::cout << "hinf error (formula): " << hi.formula << "\n";
  std::cout << "hinf error (direct):  " << hi.direct << "\n";
  return kExitOk;
}

int cmd_tree(const Options& opt) {
  const LoadedModel m = load_model(opt.model_path);
  const int r = opt.order > 0 ? opt.order : m.file.graph.order() / 2 + 1;
  const auto t0 = std::chrono::steady_clock::now();
  const TreeReduction red = tree_cluster_reduce(m.file.net, m.file.graph, r);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::json extra;
  extra["importance_csv"] =
      io::importance_csv(m.file.graph, red.importance.xi, red.importance.eta,
                         red.importance.order);
  write_reduction_outputs(opt, m, red.report, secs, extra);
  if (!opt.output.empty())
    io::atomic_write(sibling(opt.output, ".importance.csv"),
                     io::importance_csv(m.file.graph, red.importance.xi,
                                        red.importance.eta, red.importance.order));
  return kExitOk;
}

int cmd_weights(const Options& opt) {
  const LoadedModel m = load_model(opt.model_path);
  if (opt.partition_path.empty()) throw InvalidInputError("weights: --partition required");
  const Clustering c = load_partition(opt.partition_path, m.file.graph.order());
  const auto t0 = std::chrono::steady_clock::now();
  const ParameterizedReducedModel model = parameterize(m.file.net, m.file.graph, c);
  const OptimizeResult res = optimize_weights(m.file.net, model);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  ReductionReport rep;
  rep.method = "weights";
  rep.clustering = c;
  NetworkSystem reduced = model.network(res.weights);
  reduced.subsystem = m.file.net.subsystem;
  rep.reduced = reduced;
  rep.h2_error = res.objective_trace.back();
  rep.reduced_synchronizes = check_synchronization(reduced).synchronized;
  io::json extra;
  extra["baseline_h2_error"] = res.baseline;
  extra["objective_trace"] = res.objective_trace;
  extra["iterations"] = res.iterations;
  write_reduction_outputs(opt, m, rep, secs, extra);
  return kExitOk;
}

int cmd_subsys(const Options& opt) {
  const LoadedModel m = load_model(opt.model_path);
  if (opt.sub_order < 1) throw InvalidInputError("subsys: -k/--sub-order required");
  const auto t0 = std::chrono::steady_clock::now();
  const std::optional<double> lambda =
      opt.lambda_set ? std::optional<double>(opt.lambda) : std::nullopt;
  const RiccatiReduction red =
      riccati_sync_reduce(m.file.net, opt.sub_order, lambda, opt.gamma);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::json extra;
  extra["bound_note"] = "bound stated for H = W^(1/2) R^T output and binary leader inputs";
  write_reduction_outputs(opt, m, red.report, secs, extra);
  return kExitOk;
}

int cmd_simultaneous(const Options& opt) {
  const LoadedModel m = load_model(opt.model_path);
  if (opt.order < 2) throw InvalidInputError("simultaneous: -r/--order required (>= 2)");
  if (opt.sub_order < 1) throw InvalidInputError("simultaneous: -k/--sub-order required");
  if (m.file.net.single_integrator())
    throw PreconditionError("simultaneous: subsystem required (single integrators have no k)");
  const auto cert =
      passivity_certificate(*m.file.net.subsystem, PassivityMode::SymmetricCase);
  const auto t0 = std::chrono::steady_clock::now();
  const SimultaneousReduction red =
      simultaneous_reduce(m.file.net, opt.order, opt.sub_order, cert);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::json extra;
  extra["bound_stable"] = red.bound_stable;
  if (red.bound_average) extra["bound_average"] = *red.bound_average;
  if (red.bound_total) extra["bound_total"] = *red.bound_total;
  if (red.stable_error) extra["stable_error"] = *red.stable_error;
  write_reduction_outputs(opt, m, red.report, secs, extra);
  return kExitOk;
}

int cmd_error(const Options& opt) {
  const LoadedModel full = load_model(opt.model_path);
  const LoadedModel red = load_model(opt.second_path);
  const StateSpace err =
      error_system(assemble(full.file.net), assemble(red.file.net));
  if (opt.norm == "h2") {
    const auto h2 = h2_norm_semistable(err);
    if (!h2) {
      std::cout << "undefined: C J B != 0\n";
      return kExitInfeasible;
    }
    std::cout << *h2 << "\n";
  } else if (opt.norm == "hinf") {
    try {
      std::cout << hinf_norm_semistable(err) << "\n";
    } catch (const PreconditionError&) {
      std::cout << "undefined: marginal modes visible in the error transfer\n";
      return kExitInfeasible;
    }
  } else {
    throw InvalidInputError("error: --norm must be h2 or hinf");
  }
  return kExitOk;
}

int cmd_fixtures(const Options& opt) {
  const fs::path dir = opt.output.empty() ? fs::path(".") : fs::path(opt.output);
  fs::create_directories(dir);

  io::ModelFile ex1;
  ex1.graph = WeightedGraph(
      5, {{1, 2, 3}, {2, 3, 1}, {1, 4, 2}, {1, 5, 1}, {3, 4, 2}, {3, 5, 3}, {4, 5, 1}});
  ex1.net.M = Vector::Ones(5);
  ex1.net.L = build_laplacian(ex1.graph);
  ex1.net.F = Matrix::Zero(5, 2);
  ex1.net.F(0, 0) = 1.0;
  ex1.net.F(3, 1) = 1.0;
  ex1.net.F(4, 1) = 1.0;
  ex1.net.H = Matrix::Identity(5, 5);
  io::atomic_write(dir / "example1.json", io::model_to_json(ex1).dump(2) + "\n");
  io::atomic_write(dir / "example1_partition.json",
                   io::clustering_to_json(Clustering({1, 1, 2, 3, 2})).dump(2) + "\n");

  io::ModelFile ex34;
  ex34.graph = WeightedGraph(
      6, {{1, 2, 1}, {2, 3, 1}, {1, 4, 1}, {3, 5, 1}, {4, 6, 1}, {5, 6, 1}});
  ex34.net.M = Vector::Ones(6);
  ex34.net.L = build_laplacian(ex34.graph);
  ex34.net.F = Matrix::Zero(6, 1);
  ex34.net.F(2, 0) = 1.0;
  ex34.net.H = Matrix::Zero(1, 6);
  ex34.net.H(0, 3) = 1.0;
  io::atomic_write(dir / "example34.json", io::model_to_json(ex34).dump(2) + "\n");
  io::atomic_write(dir / "example34_partition.json",
                   io::clustering_to_json(Clustering({1, 1, 2, 3, 4, 4})).dump(2) + "\n");

  std::cout << "wrote example1.json, example1_partition.json, example34.json, "
               "example34_partition.json under "
            << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure-preserving reduced-order modeling of diffusively coupled networks"};
  app.require_subcommand(1);
  Options opt;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("model", opt.model_path, "network model JSON")->required();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", opt.output, "output path");
    sub->add_option("--threads", opt.threads, "worker threads for pairwise work");
  };

  CLI::App* check = app.add_subcommand("check", "validate a model and report its properties");
  add_model(check);

  CLI::App* dissim = app.add_subcommand("dissim", "dissimilarity matrix (CSV)");
  add_model(dissim);
  add_common(dissim);

  CLI::App* cluster = app.add_subcommand("cluster", "hierarchical clustering reduction");
  add_model(cluster);
  add_common(cluster);
  cluster->add_option("-r,--order", opt.order, "number of clusters");
  cluster->add_option("--linkage", opt.linkage, "average|single|complete");
  cluster->add_option("--partition", opt.partition_path, "project a given clustering JSON");

  CLI::App* aep = app.add_subcommand("aep", "almost-equitable-partition error formulas");
  add_model(aep);
  aep->add_option("--partition", opt.partition_path, "clustering JSON")->required();

  CLI::App* tree = app.add_subcommand("tree", "edge-Gramian tree reduction");
  add_model(tree);
  add_common(tree);
  tree->add_option("-r,--order", opt.order, "number of clusters");

  CLI::App* weights = app.add_subcommand("weights", "H2-optimal edge weighting");
  add_model(weights);
  add_common(weights);
  weights->add_option("--partition", opt.partition_path, "clustering JSON")->required();

  CLI::App* subsys = app.add_subcommand("subsys", "Riccati subsystem reduction");
  add_model(subsys);
  add_common(subsys);
  subsys->add_option("-k,--sub-order", opt.sub_order, "reduced subsystem order")->required();
  subsys->add_option("--gamma", opt.gamma, "gain parameter in (0,1)");
  subsys->add_option("--lambda", opt.lambda, "interpolation eigenvalue")
      ->each([&](const std::string&) { opt.lambda_set = true; });

  CLI::App* simultaneous =
      app.add_subcommand("simultaneous", "joint network + subsystem reduction");
  add_model(simultaneous);
  add_common(simultaneous);
  simultaneous->add_option("-r,--order", opt.order, "reduced network order")->required();
  simultaneous->add_option("-k,--sub-order", opt.sub_order, "reduced subsystem order")
      ->required();

  CLI::App* error = app.add_subcommand("error", "norm of the error between two models");
  add_model(error);
  error->add_option("reduced", opt.second_path, "reduced model JSON")->required();
  error->add_option("--norm", opt.norm, "h2|hinf");

  CLI::App* fixtures = app.add_subcommand("fixtures", "write the bundled example models");
  fixtures->add_option("-o,--output", opt.output, "output directory");

  CLI::App* reduce = app.add_subcommand("reduce", "dispatch by --method");
  add_model(reduce);
  add_common(reduce);
  reduce->add_option("--method", opt.method, "cluster|tree|weights|subsys|simultaneous")
      ->required();
  reduce->add_option("-r,--order", opt.order, "target order");
  reduce->add_option("-k,--sub-order", opt.sub_order, "reduced subsystem order");
  reduce->add_option("--partition", opt.partition_path, "clustering JSON");
  reduce->add_option("--linkage", opt.linkage, "average|single|complete");
  reduce->add_option("--gamma", opt.gamma, "gain parameter in (0,1)");
  reduce->add_option("--lambda", opt.lambda, "interpolation eigenvalue")
      ->each([&](const std::string&) { opt.lambda_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(opt);
    if (dissim->parsed()) return cmd_dissim(opt);
    if (cluster->parsed()) return cmd_cluster(opt);
    if (aep->parsed()) return cmd_aep(opt);
    if (tree->parsed()) return cmd_tree(opt);
    if (weights->parsed()) return cmd_weights(opt);
    if (subsys->parsed()) return cmd_subsys(opt);
    if (simultaneous->parsed()) return cmd_simultaneous(opt);
    if (error->parsed()) return cmd_error(opt);
    if (fixtures->parsed()) return cmd_fixtures(opt);
    if (reduce->parsed()) {
      if (opt.method == "cluster") return cmd_cluster(opt);
      if (opt.method == "tree") return cmd_tree(opt);
      if (opt.method == "weights") return cmd_weights(opt);
      if (opt.method == "subsys") return cmd_subsys(opt);
      if (opt.method == "simultaneous") return cmd_simultaneous(opt);
      throw InvalidInputError("unknown method: " + opt.method);
    }
  } catch (const PreconditionError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InvalidInputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitModel;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
