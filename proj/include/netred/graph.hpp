// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0
//
// Weighted undirected graphs: Laplacian/incidence construction, clusterings
// and their projections, quotient graphs, almost equitable partitions, and
// realization of a Laplacian from a prescribed spectrum.

#ifndef NETRED_GRAPH_HPP
#define NETRED_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "netred/types.hpp"

namespace netred {

/// An undirected edge (i, j) with 1-based vertex ids, i < j, and weight w > 0.
struct Edge {
  int i = 0;
  int j = 0;
  double w = 0.0;
};

/// Simple weighted undirected graph. Vertex ids are 1-based (paper
/// convention); edges are kept normalized (i < j) and sorted lexicographically
/// so that incidence matrices are reproducible bit-for-bit.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 1) throw InvalidInputError("graph must have at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (Edge e : edges) {
      if (e.i == e.j) throw InvalidInputError("self-loop rejected");
      if (e.i < 1 || e.i > n || e.j < 1 || e.j > n)
        throw InvalidInputError("vertex id out of range");
      if (!(e.w > 0.0)) throw InvalidInputError("edge weight must be positive");
      if (e.i > e.j) std::swap(e.i, e.j);
      if (!seen.insert({e.i, e.j}).second)
        throw InvalidInputError("duplicate edge rejected");
      edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });
  }

  int order() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool is_tree() const {
    return static_cast<int>(edges_.size()) == n_ - 1 && is_connected();
  }

  bool is_connected() const {
    std::vector<int> parent(n_ + 1);
    for (int v = 1; v <= n_; ++v) parent[v] = v;
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    int comps = n_;
    for (const Edge& e : edges_) {
      int a = find(e.i), b = find(e.j);
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
    return comps == 1;
  }

 private:
  int n_ = 1;
  std::vector<Edge> edges_;
};

/// Oriented incidence matrix R (n x |E|, +1 at the smaller endpoint) together
/// with the diagonal edge-weight matrix W, so that L = R W R^T.
struct IncidencePair {
  Matrix R;
  Matrix W;
};

/// Laplacian by the degree-minus-adjacency formula.
inline Matrix build_laplacian(const WeightedGraph& g) {
  Matrix L = Matrix::Zero(g.order(), g.order());
  for (const Edge& e : g.edges()) {
    const int a = e.i - 1, b = e.j - 1;
    L(a, b) -= e.w;
    L(b, a) -= e.w;
    L(a, a) += e.w;
    L(b, b) += e.w;
  }
  return L;
}

inline IncidencePair incidence(const WeightedGraph& g) {
  const Index m = static_cast<Index>(g.edges().size());
  IncidencePair out;
  out.R = Matrix::Zero(g.order(), m);
  out.W = Matrix::Zero(m, m);
  for (Index k = 0; k < m; ++k) {
    const Edge& e = g.edges()[static_cast<size_t>(k)];
    out.R(e.i - 1, k) = 1.0;
    out.R(e.j - 1, k) = -1.0;
    out.W(k, k) = e.w;
  }
  return out;
}

/// Verdict of check_laplacian: which of the three structural conditions hold
/// (symmetric PSD; ker L = span(1) i.e. zero row sums with simple zero
/// eigenvalue; sign pattern), plus the recovered graph when all do.
struct LaplacianCheck {
  bool symmetric_psd = false;
  bool kernel_is_ones = false;  // zero row sums and simple zero eigenvalue
  bool sign_pattern = false;    // off-diagonal <= 0, diagonal > 0
  bool connected = false;
  bool valid = false;
  double lambda2 = 0.0;
  WeightedGraph graph;
};

inline LaplacianCheck check_laplacian(const Matrix& L,
                                      const Tolerances& tol = default_tol()) {
  if (L.rows() != L.cols()) throw InvalidInputError("matrix must be square");
  const Index n = L.rows();
  LaplacianCheck out;
  if (n == 1) {
    // the one-vertex graph: L = [0]
    out.symmetric_psd = out.kernel_is_ones = out.sign_pattern = true;
    out.connected = out.valid = std::abs(L(0, 0)) <= tol.laplacian_validity;
    out.graph = WeightedGraph(1, {});
    return out;
  }
  const double scale = std::max(L.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  const double eps = tol.laplacian_validity * scale;

  out.symmetric_psd = (L - L.transpose()).cwiseAbs().maxCoeff() <= eps;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (L + L.transpose()));
  const Vector ev = es.eigenvalues();
  out.symmetric_psd = out.symmetric_psd && ev(0) >= -eps;

  const double rowsum = (L * Vector::Ones(n)).cwiseAbs().maxCoeff();
  out.connected = ev(1) > tol.connectivity * std::max(ev(n - 1), 1e-300);
  out.kernel_is_ones = rowsum <= eps && out.connected;

  out.sign_pattern = true;
  for (Index i = 0; i < n && out.sign_pattern; ++i) {
    if (!(L(i, i) > 0.0)) out.sign_pattern = false;
    for (Index j = 0; j < n; ++j)
      if (j != i && L(i, j) > eps) out.sign_pattern = false;
  }

  out.lambda2 = ev(1);
  out.valid = out.symmetric_psd && out.kernel_is_ones && out.sign_pattern;
  if (out.valid) {
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const double w = -0.5 * (L(i, j) + L(j, i));
        if (w > eps) edges.push_back({int(i) + 1, int(j) + 1, w});
      }
    out.graph = WeightedGraph(static_cast<int>(n), std::move(edges));
  }
  return out;
}

/// Assignment of n vertices to r clusters (1-based ids, every cluster
/// nonempty). The characteristic matrix Pi is binary with one 1 per row.
class Clustering {
 public:
  Clustering() = default;

  explicit Clustering(std::vector<int> assignment) : assign_(std::move(assignment)) {
    if (assign_.empty()) throw InvalidInputError("empty clustering");
    r_ = *std::max_element(assign_.begin(), assign_.end());
    std::vector<int> count(static_cast<size_t>(r_) + 1, 0);
    for (int c : assign_) {
      if (c < 1 || c > r_) throw InvalidInputError("cluster id out of range");
      ++count[static_cast<size_t>(c)];
    }
    for (int c = 1; c <= r_; ++c)
      if (count[static_cast<size_t>(c)] == 0)
        throw InvalidInputError("empty cluster " + std::to_string(c));
  }

  static Clustering identity(int n) {
    std::vector<int> a(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i)] = i + 1;
    return Clustering(std::move(a));
  }

  int size() const { return static_cast<int>(assign_.size()); }
  int clusters() const { return r_; }
  const std::vector<int>& assignment() const { return assign_; }
  int cluster_of(int vertex_1based) const {
    return assign_[static_cast<size_t>(vertex_1based - 1)];
  }

  std::vector<std::vector<int>> cells() const {
    std::vector<std::vector<int>> out(static_cast<size_t>(r_));
    for (int v = 1; v <= size(); ++v)
      out[static_cast<size_t>(cluster_of(v) - 1)].push_back(v);
    return out;
  }

  Matrix characteristic_matrix() const {
    Matrix Pi = Matrix::Zero(size(), r_);
    for (int v = 0; v < size(); ++v) Pi(v, assign_[static_cast<size_t>(v)] - 1) = 1.0;
    return Pi;
  }

  /// Composition: first *this (n -> r), then a clustering of the r clusters.
  Clustering compose(const Clustering& coarser) const {
    if (coarser.size() != r_) throw InvalidInputError("composition size mismatch");
    std::vector<int> a(assign_.size());
    for (size_t v = 0; v < assign_.size(); ++v)
      a[v] = coarser.cluster_of(assign_[v]);
    return Clustering(std::move(a));
  }

 private:
  std::vector<int> assign_;
  int r_ = 0;
};

/// Petrov-Galerkin projection of the network matrices by the characteristic
/// matrix: M_hat = Pi^T M Pi, L_hat = Pi^T L Pi, F_hat = Pi^T F, H_hat = H Pi.
struct ProjectedMatrices {
  Matrix M, L, F, H;
};

inline ProjectedMatrices project_network(const Clustering& c, const Matrix& M,
                                         const Matrix& L, const Matrix& F,
                                         const Matrix& H) {
  const Index n = L.rows();
  if (c.size() != n || M.rows() != n || F.rows() != n || H.cols() != n)
    throw InvalidInputError("project_network: dimension mismatch");
  const Matrix Pi = c.characteristic_matrix();
  return {Pi.transpose() * M * Pi, Pi.transpose() * L * Pi, Pi.transpose() * F,
          H * Pi};
}

/// Quotient graph of a clustering: r vertices, one edge per unordered cluster
/// pair with at least one crossing edge. R_hat columns are oriented +1 at the
/// smaller cluster id and ordered lexicographically; edge_origin maps each
/// quotient edge to the original edges it aggregates (1-based edge indices
/// into g.edges()).
struct QuotientGraph {
  int r = 0;
  Matrix R_hat;                               // r x kappa
  std::vector<std::pair<int, int>> edges;     // (k, l), k < l, 1-based
  std::vector<double> aggregate_weight;       // sum of crossing weights
  std::vector<std::vector<int>> edge_origin;  // per quotient edge
};

inline QuotientGraph quotient_graph(const WeightedGraph& g, const Clustering& c) {
  if (c.size() != g.order())
    throw InvalidInputError("quotient_graph: clustering size mismatch");
  std::map<std::pair<int, int>, std::vector<int>> cross;
  std::map<std::pair<int, int>, double> wsum;
  for (int e = 0; e < static_cast<int>(g.edges().size()); ++e) {
    const Edge& ed = g.edges()[static_cast<size_t>(e)];
    int k = c.cluster_of(ed.i), l = c.cluster_of(ed.j);
    if (k == l) continue;
    if (k > l) std::swap(k, l);
    cross[{k, l}].push_back(e + 1);
    wsum[{k, l}] += ed.w;
  }
  QuotientGraph q;
  q.r = c.clusters();
  q.R_hat = Matrix::Zero(q.r, static_cast<Index>(cross.size()));
  Index col = 0;
  for (const auto& [pair, origin] : cross) {
    q.edges.push_back(pair);
    q.edge_origin.push_back(origin);
    q.aggregate_weight.push_back(wsum[pair]);
    q.R_hat(pair.first - 1, col) = 1.0;
    q.R_hat(pair.second - 1, col) = -1.0;
    ++col;
  }
  // connectivity of the quotient
  std::vector<Edge> qedges;
  for (size_t k = 0; k < q.edges.size(); ++k)
    qedges.push_back({q.edges[k].first, q.edges[k].second, q.aggregate_weight[k]});
  if (!WeightedGraph(q.r, qedges).is_connected())
    throw PreconditionError("quotient graph is disconnected");
  return q;
}

/// Almost equitable partition test: every vertex of a cell must carry the
/// same total weight toward each other cell.
struct AepVerdict {
  bool is_aep = false;
  double worst_violation = 0.0;
};

inline AepVerdict is_almost_equitable(const WeightedGraph& g, const Clustering& c,
                                      const Tolerances& tol = default_tol()) {
  if (c.size() != g.order())
    throw InvalidInputError("is_almost_equitable: size mismatch");
  const int n = g.order(), r = c.clusters();
  Matrix W = Matrix::Zero(n, n);
  for (const Edge& e : g.edges()) {
    W(e.i - 1, e.j - 1) = e.w;
    W(e.j - 1, e.i - 1) = e.w;
  }
  // toward(v, cell) = sum of weights from v into the cell
  Matrix toward = Matrix::Zero(n, r);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u) toward(v, c.cluster_of(u + 1) - 1) += W(v, u);

  AepVerdict out;
  const auto cells = c.cells();
  for (int mu = 0; mu < r; ++mu)
    for (int nu = 0; nu < r; ++nu) {
      if (mu == nu) continue;
      double lo = 0, hi = 0;
      bool first = true;
      for (int v : cells[static_cast<size_t>(mu)]) {
        const double t = toward(v - 1, nu);
        if (first) lo = hi = t, first = false;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
      out.worst_violation = std::max(out.worst_violation, hi - lo);
    }
  out.is_aep = out.worst_violation <= tol.aep;
  return out;
}

/// Laplacian with prescribed spectrum 0 = l1 < l2 <= ... <= lr, via a Soules
/// basis: V orthogonal with first column 1/sqrt(r) built from the one-vertex
/// splits, N = V diag(c - l) V^T entrywise nonnegative for the descending
/// diagonal (partial projector sums are block-averaging matrices), and
/// L = cI - N has nonpositive off-diagonals and zero row sums.
struct LaplacianRealization {
  Matrix L;
  Matrix V;  // orthogonal, L = V diag(spectrum) V^T, V.col(0) = 1/sqrt(r)
};

inline LaplacianRealization realize_laplacian(Vector spectrum,
                                              const Tolerances& tol = default_tol()) {
  const Index r = spectrum.size();
  if (r < 1) throw InvalidInputError("empty spectrum");
  std::sort(spectrum.data(), spectrum.data() + r);
  const double lmax = spectrum(r - 1);
  if (std::abs(spectrum(0)) > tol.spectrum_rel * std::max(lmax, 1.0))
    throw InvalidInputError("spectrum must contain an exact zero");
  spectrum(0) = 0.0;
  for (Index i = 1; i < r; ++i)
    if (!(spectrum(i) > 0.0))
      throw InvalidInputError("nonzero eigenvalues must be positive (simple zero)");

  Matrix V = Matrix::Zero(r, r);
  V.col(0).setConstant(1.0 / std::sqrt(double(r)));
  // column k (k >= 1) splits {1..m} into {1..m-1} and {m}, m = r - k + 1
  for (Index k = 1; k < r; ++k) {
    const Index m = r - k + 1;
    const double norm = std::sqrt(double(m) * double(m - 1));
    for (Index i = 0; i < m - 1; ++i) V(i, k) = 1.0 / norm;
    V(m - 1, k) = -double(m - 1) / norm;
  }
  if (r == 1) return {Matrix::Zero(1, 1), V};
  if (r == 2) {
    // the unique 2-vertex realization: one edge of weight lambda_2 / 2
    Matrix L(2, 2);
    const double w = spectrum(1) / 2.0;
    L << w, -w, -w, w;
    return {std::move(L), std::move(V)};
  }

  const double c = spectrum(r - 1);
  Vector d(r);
  for (Index i = 0; i < r; ++i) d(i) = c - spectrum(i);  // descending, >= 0
  Matrix N = V * d.asDiagonal() * V.transpose();
  Matrix L = c * Matrix::Identity(r, r) - N;
  // N is entrywise nonnegative in exact arithmetic; clear rounding fuzz so
  // the off-diagonal sign pattern is exact, then restore zero row sums.
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < r; ++j)
      if (i != j && L(i, j) > 0.0) L(i, j) = 0.0;
  }
  L = 0.5 * (L + L.transpose());
  for (Index i = 0; i < r; ++i) {
    L(i, i) = 0.0;
    L(i, i) = -L.row(i).sum();
  }
  return {std::move(L), std::move(V)};
}

}  // namespace netred

#endif  // NETRED_GRAPH_HPP
