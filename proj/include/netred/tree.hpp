// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0
//
// Clustering of tree networks through the edge system: edge Laplacian,
// diagonal generalized edge Gramians ordered by importance, recursive
// aggregation of the least important edges, and the tree H-infinity bound.

#ifndef NETRED_TREE_HPP
#define NETRED_TREE_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "netred/cluster.hpp"
#include "netred/graph.hpp"
#include "netred/linsys.hpp"
#include "netred/network.hpp"
#include "netred/types.hpp"

namespace netred {

/// Edge system of a tree network: L_e = R^T R W with F_e = R^T F,
/// H_e = H R W L_e^-1, and the dual realization F_f = L_e^-1 F_e, H_f = H R W.
struct EdgeSystem {
  WeightedGraph graph;
  Matrix R, W;
  Matrix Le;        // (n-1) x (n-1)
  Matrix Fe, He;    // edge system ports
  Matrix Ff, Hf;    // dual realization ports
};

inline EdgeSystem edge_systems(const NetworkSystem& net, const WeightedGraph& g,
                               const Tolerances& tol = default_tol()) {
  if (!g.is_tree()) throw PreconditionError("edge_systems: underlying graph is not a tree");
  if ((net.M.array() - 1.0).abs().maxCoeff() > 1e-12)
    throw PreconditionError("edge_systems: M = I required");
  EdgeSystem es;
  es.graph = g;
  const IncidencePair inc = incidence(g);
  es.R = inc.R;
  es.W = inc.W;
  es.Le = es.R.transpose() * es.R * es.W;
  es.Fe = es.R.transpose() * net.F;
  const Matrix RW = es.R * es.W;
  es.He = net.H * RW * es.Le.inverse();
  es.Ff = es.Le.fullPivLu().solve(es.Fe);
  es.Hf = net.H * RW;
  (void)tol;
  return es;
}

/// Diagonal generalized edge Gramians (xi, eta) satisfying
///   -L_e X - X L_e^T + R^T F F^T R    <= 0,
///   -L_e^T Y - Y L_e + W R^T F F^T R W <= 0,
/// with the edge ordering permutation making xi_i eta_i descending.
/// Construction: X = alpha W^-1 and Y = alpha W are feasible by congruence
/// (both inequalities reduce to R^T F F^T R <= 2 alpha R^T R), then each
/// entry is tightened by bisection while the residuals stay <= 0.
struct EdgeImportance {
  Vector xi, eta;              // in original edge order
  std::vector<Index> order;    // permutation, xi*eta descending
  double worst_residual = 0.0; // max eigenvalue over both residuals
};

namespace detail {

inline double diag_residual(const Matrix& Le, const Vector& d, const Matrix& S,
                            bool transpose_first) {
  const Matrix X = d.asDiagonal();
  const Matrix R = transpose_first ? Matrix(-Le.transpose() * X - X * Le + S)
                                   : Matrix(-Le * X - X * Le.transpose() + S);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (R + R.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline void tighten_diag(const Matrix& Le, Vector& d, const Matrix& S, bool transpose_first,
                         double feas_tol, int sweeps = 3) {
  const Index m = d.size();
  for (int s = 0; s < sweeps; ++s)
    for (Index i = 0; i < m; ++i) {
      double lo = 0.0, hi = d(i);
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        Vector trial = d;
        trial(i) = mid;
        if (diag_residual(Le, trial, S, transpose_first) <= feas_tol)
          hi = mid;
        else
          lo = mid;
      }
      d(i) = hi;
    }
}

}  // namespace detail

inline EdgeImportance diagonal_edge_gramians(const EdgeSystem& es, const Matrix& F,
                                             const Tolerances& tol = default_tol()) {
  const Index m = es.Le.rows();
  const Matrix RtF = es.R.transpose() * F;
  const Matrix Sx = RtF * RtF.transpose();
  const Matrix Sy = es.W * Sx * es.W;

  EdgeImportance out;
  const double fscale = Sx.norm();
  if (fscale < 1e-300) {
    // zero input: any positive diagonal is feasible
    out.xi = Vector::Constant(m, 1e-12);
    out.eta = Vector::Constant(m, 1e-12);
    out.order.resize(static_cast<size_t>(m));
    std::iota(out.order.begin(), out.order.end(), Index(0));
    out.worst_residual = 0.0;
    return out;
  }

  // provably feasible start: R^T F F^T R <= 2 alpha R^T R
  const Matrix RtR = es.R.transpose() * es.R;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(Sx, RtR);
  const double alpha = std::max(ges.eigenvalues().maxCoeff(), 0.0) / 2.0 * (1.0 + 1e-12);
  Vector xi = alpha * es.W.diagonal().cwiseInverse();
  Vector eta = alpha * es.W.diagonal();

  const double feas = tol.lyap_residual * std::max(1.0, fscale);
  detail::tighten_diag(es.Le, xi, Sx, /*transpose_first=*/false, feas);
  detail::tighten_diag(es.Le, eta, Sy, /*transpose_first=*/true, feas);

  out.xi = xi;
  out.eta = eta;
  out.worst_residual = std::max(detail::diag_residual(es.Le, xi, Sx, false),
                                detail::diag_residual(es.Le, eta, Sy, true));
  if (out.worst_residual > 10.0 * feas)
    throw NumericalError("diagonal_edge_gramians: feasibility lost after tightening");
  out.order.resize(static_cast<size_t>(m));
  std::iota(out.order.begin(), out.order.end(), Index(0));
  const Vector imp = xi.cwiseProduct(eta);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](Index a, Index b) { return imp(a) > imp(b); });
  return out;
}

/// Tree reduction: recursively aggregates the endpoints of the least
/// important edges until r clusters remain, and reports the a-priori bound
///   2 * sum_{i=r}^{n-1} [L_e^-1]_ii sqrt(xi_i eta_i)
/// evaluated in importance order (descending xi*eta).
struct TreeReduction {
  ReductionReport report;
  EdgeImportance importance;
};

inline TreeReduction tree_cluster_reduce(const NetworkSystem& net, const WeightedGraph& g,
                                         int r, const Tolerances& tol = default_tol()) {
  const int n = g.order();
  if (r < 1 || r > n) throw InvalidInputError("tree_cluster_reduce: r out of range");
  const EdgeSystem es = edge_systems(net, g, tol);
  const EdgeImportance imp = diagonal_edge_gramians(es, net.F, tol);

  // union-find over the n - r least important edges
  std::vector<int> parent(static_cast<size_t>(n) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<size_t>(v)] != v)
      v = parent[static_cast<size_t>(v)] =
          parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
    return v;
  };
  for (size_t k = static_cast<size_t>(r) - 1; k < imp.order.size(); ++k) {
    const Edge& e = g.edges()[static_cast<size_t>(imp.order[k])];
    parent[static_cast<size_t>(find(e.i))] = find(e.j);
  }
  // cluster ids ordered by smallest member
  std::vector<int> roots;
  for (int v = 1; v <= n; ++v) {
    const int rt = find(v);
    if (std::find(roots.begin(), roots.end(), rt) == roots.end()) roots.push_back(rt);
  }
  std::vector<int> assign(static_cast<size_t>(n));
  for (int v = 1; v <= n; ++v)
    assign[static_cast<size_t>(v - 1)] =
        static_cast<int>(std::find(roots.begin(), roots.end(), find(v)) - roots.begin()) + 1;

  TreeReduction out;
  out.importance = imp;
  out.report = reduce_by_clustering(net, Clustering(std::move(assign)), tol);
  out.report.method = "tree";
  out.report.bound_norm = "hinf";

  // bound in importance order: permute edges, recompute L_e^-1 diagonal
  const Index m = es.Le.rows();
  Matrix Rp(es.R.rows(), m), Wp = Matrix::Zero(m, m);
  Vector imps(m);
  for (Index k = 0; k < m; ++k) {
    Rp.col(k) = es.R.col(imp.order[static_cast<size_t>(k)]);
    Wp(k, k) = es.W(imp.order[static_cast<size_t>(k)], imp.order[static_cast<size_t>(k)]);
    imps(k) = imp.xi(imp.order[static_cast<size_t>(k)]) * imp.eta(imp.order[static_cast<size_t>(k)]);
  }
  const Matrix Lep_inv = Matrix(Rp.transpose() * Rp * Wp).inverse();
  double bound = 0.0;
  for (Index i = r - 1; i < m; ++i) bound += Lep_inv(i, i) * std::sqrt(std::max(imps(i), 0.0));
  out.report.bound = 2.0 * bound;

  const StateSpace err = error_system(assemble(net), assemble(out.report.reduced));
  out.report.hinf_error = hinf_norm_semistable(err, tol);
  return out;
}

}  // namespace netred

#endif  // NETRED_TREE_HPP
