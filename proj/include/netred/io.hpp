// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0
//
// File formats: graph / clustering / network-model JSON schemas, dendrogram
// JSON, dissimilarity and edge-importance CSV, and run reports. All writes
// go through a temp-file-and-rename so failures never leave partial output.

#ifndef NETRED_IO_HPP
#define NETRED_IO_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "netred/cluster.hpp"
#include "netred/graph.hpp"
#include "netred/network.hpp"
#include "netred/types.hpp"

namespace netred::io {

using nlohmann::json;

inline json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InvalidInputError("matrix: expected a nested array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (static_cast<Index>(j[static_cast<size_t>(i)].size()) != cols)
      throw InvalidInputError("matrix: ragged rows");
    for (Index c = 0; c < cols; ++c)
      M(i, c) = j[static_cast<size_t>(i)][static_cast<size_t>(c)].get<double>();
  }
  return M;
}

inline json graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({{"i", e.i}, {"j", e.j}, {"w", e.w}});
  return {{"n", g.order()}, {"edges", std::move(edges)}};
}

inline WeightedGraph graph_from_json(const json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at("i").get<int>(), e.at("j").get<int>(), e.at("w").get<double>()});
  return WeightedGraph(j.at("n").get<int>(), std::move(edges));
}

inline json clustering_to_json(const Clustering& c) {
  return {{"assignment", c.assignment()}};
}

inline Clustering clustering_from_json(const json& j) {
  return Clustering(j.at("assignment").get<std::vector<int>>());
}

/// Model document: vertex weights, graph, F, H, optional subsystem.
struct ModelFile {
  NetworkSystem net;
  WeightedGraph graph;
};

inline json model_to_json(const ModelFile& m) {
  json j;
  j["version"] = 1;
  j["M"] = std::vector<double>(m.net.M.data(), m.net.M.data() + m.net.M.size());
  j["graph"] = graph_to_json(m.graph);
  j["F"] = matrix_to_json(m.net.F);
  j["H"] = matrix_to_json(m.net.H);
  if (m.net.subsystem) {
    j["subsystem"] = {{"A", matrix_to_json(m.net.subsystem->A)},
                      {"B", matrix_to_json(m.net.subsystem->B)},
                      {"C", matrix_to_json(m.net.subsystem->C)}};
  }
  return j;
}

inline ModelFile model_from_json(const json& j) {
  ModelFile m;
  m.graph = graph_from_json(j.at("graph"));
  const auto mv = j.at("M").get<std::vector<double>>();
  m.net.M = Eigen::Map<const Vector>(mv.data(), static_cast<Index>(mv.size()));
  m.net.L = build_laplacian(m.graph);
  m.net.F = matrix_from_json(j.at("F"));
  m.net.H = matrix_from_json(j.at("H"));
  if (j.contains("subsystem")) {
    const auto& s = j.at("subsystem");
    m.net.subsystem = StateSpace(matrix_from_json(s.at("A")), matrix_from_json(s.at("B")),
                                 matrix_from_json(s.at("C")));
  }
  if (m.net.M.size() != m.graph.order())
    throw InvalidInputError("model: M length does not match graph order");
  if (m.net.F.rows() != m.graph.order() || m.net.H.cols() != m.graph.order())
    throw InvalidInputError("model: F/H dimensions do not match graph order");
  return m;
}

inline json dendrogram_to_json(const std::vector<DendrogramMerge>& merges) {
  json arr = json::array();
  for (const auto& m : merges) arr.push_back({{"a", m.a}, {"b", m.b}, {"value", m.value}});
  return {{"merges", std::move(arr)}};
}

inline std::string dissimilarity_csv(const Matrix& D) {
  std::ostringstream os;
  char buf[64];
  for (Index i = 0; i < D.rows(); ++i) {
    for (Index j = 0; j < D.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g", D(i, j));
      os << buf << (j + 1 < D.cols() ? "," : "");
    }
    os << "\n";
  }
  return os.str();
}

inline std::string importance_csv(const WeightedGraph& g, const Vector& xi, const Vector& eta,
                                  const std::vector<Index>& order) {
  std::ostringstream os;
  os << "i,j,xi,eta,xi_eta,rank\n";
  std::vector<Index> rank(static_cast<size_t>(xi.size()));
  for (size_t pos = 0; pos < order.size(); ++pos)
    rank[static_cast<size_t>(order[pos])] = static_cast<Index>(pos) + 1;
  char buf[160];
  for (Index e = 0; e < xi.size(); ++e) {
    const Edge& ed = g.edges()[static_cast<size_t>(e)];
    std::snprintf(buf, sizeof(buf), "%d,%d,%.9g,%.9g,%.9g,%ld\n", ed.i, ed.j, xi(e), eta(e),
                  xi(e) * eta(e), static_cast<long>(rank[static_cast<size_t>(e)]));
    os << buf;
  }
  return os.str();
}

/// FNV-1a digest of a canonical serialization, recorded in run reports so
/// every numeric claim is tied to its inputs.
inline std::string digest(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json report_to_json(const ReductionReport& rep, const std::string& inputs_digest,
                           double seconds, unsigned seed = 0) {
  json j;
  j["method"] = rep.method;
  j["inputs_digest"] = inputs_digest;
  j["seconds"] = seconds;
  j["seed"] = seed;
  if (rep.clustering.size() > 0) j["clustering"] = clustering_to_json(rep.clustering);
  if (rep.h2_error) j["h2_error"] = *rep.h2_error;
  if (!rep.h2_defined) j["h2_error_defined"] = false;
  if (rep.hinf_error) j["hinf_error"] = *rep.hinf_error;
  if (rep.bound) {
    j["bound"] = *rep.bound;
    j["bound_norm"] = rep.bound_norm;
  }
  if (rep.gamma) j["gamma"] = *rep.gamma;
  if (rep.gamma_s) j["gamma_s"] = *rep.gamma_s;
  if (!rep.ghsv_network.empty()) j["ghsv_network"] = rep.ghsv_network;
  if (!rep.ghsv_subsystem.empty()) j["ghsv_subsystem"] = rep.ghsv_subsystem;
  if (rep.method == "subsys") {
    j["lambda"] = rep.chosen_lambda;
    j["delta"] = rep.delta;
    j["gamma_param"] = rep.gamma_param;
  }
  j["steady_output_match"] = rep.steady_output_match;
  j["reduced_synchronizes"] = rep.reduced_synchronizes;
  return j;
}

/// Writes via a temporary file in the same directory plus an atomic rename.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  const fs::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw InvalidInputError("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os.good()) {
      os.close();
      fs::remove(tmp);
      throw NumericalError("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

inline json load_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInputError("cannot read " + path.string());
  json j;
  is >> j;
  return j;
}

}  // namespace netred::io

#endif  // NETRED_IO_HPP
