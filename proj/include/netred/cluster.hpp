// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0
//
// Dissimilarity-based clustering: pairwise vertex dissimilarity (pseudo
// Gramian and reduced-coordinate routes), hierarchical merging, clustered
// reduced models, almost-equitable-partition error formulas, and the
// gamma / gamma_s a-priori H2 error bounds.

#ifndef NETRED_CLUSTER_HPP
#define NETRED_CLUSTER_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "netred/graph.hpp"
#include "netred/linsys.hpp"
#include "netred/network.hpp"
#include "netred/types.hpp"

namespace netred {

/// Steady-state projector of the single-integrator network: 1 1^T M / (1^T M 1).
inline Matrix consensus_projector(const Vector& M) {
  const Index n = M.size();
  const Vector one = Vector::Ones(n);
  return one * (M.transpose()) / M.sum();
}

/// Pseudo controllability Gramian of a single-integrator network,
/// from -M^-1 L P - P L M^-1 + (I-J) M^-1 F F^T M^-1 (I-J)^T = 0.
inline Matrix single_integrator_pseudo_gramian(const NetworkSystem& net,
                                               const Tolerances& tol = default_tol()) {
  if (!net.single_integrator())
    throw PreconditionError("single_integrator_pseudo_gramian: subsystem present");
  const StateSpace sys = assemble(net);
  return pseudo_gramians(sys, tol).P;
}

enum class DissimilarityRoute { Auto, PseudoGramian, ReducedCoordinates };

/// Difference-coordinate matrices of the synchronization-reduced system:
/// S = [-I; 1^T], Sdag = (S^T M^-1 S)^-1 S^T M^-1.
struct DifferenceCoordinates {
  Matrix S, Sdag;
};

inline DifferenceCoordinates difference_coordinates(const Vector& M) {
  const Index n = M.size();
  DifferenceCoordinates out;
  out.S = Matrix::Zero(n, n - 1);
  out.S.topRows(n - 1) = -Matrix::Identity(n - 1, n - 1);
  out.S.bottomRows(1).setOnes();
  const Matrix Minv = M.cwiseInverse().asDiagonal();
  out.Sdag = (out.S.transpose() * Minv * out.S).ldlt().solve(out.S.transpose() * Minv);
  return out;
}

/// Pairwise dissimilarity matrix D_ij = || eta_i(s) - eta_j(s) ||_H2.
/// The single-integrator route evaluates quadratic forms of the pseudo
/// controllability Gramian; the general route solves one Lyapunov equation
/// in the difference coordinates. Requires a synchronizing network.
inline Matrix dissimilarity_matrix(const NetworkSystem& net,
                                   DissimilarityRoute route = DissimilarityRoute::Auto,
                                   int threads = 1,
                                   const Tolerances& tol = default_tol()) {
  const Index n = net.vertices();
  if (!check_synchronization(net, tol).synchronized)
    throw PreconditionError("dissimilarity_matrix: network does not synchronize");
  if (route == DissimilarityRoute::Auto)
    route = net.single_integrator() ? DissimilarityRoute::PseudoGramian
                                    : DissimilarityRoute::ReducedCoordinates;

  Matrix D = Matrix::Zero(n, n);
  if (route == DissimilarityRoute::PseudoGramian) {
    if (!net.single_integrator())
      throw PreconditionError("dissimilarity_matrix: pseudo-Gramian route requires single integrators");
    const Matrix P = single_integrator_pseudo_gramian(net, tol);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        const Vector e = Vector::Unit(n, i) - Vector::Unit(n, j);
        D(i, j) = D(j, i) = std::sqrt(std::max(e.dot(P * e), 0.0));
      }
    return D;
  }

  const StateSpace sub = net.agent();
  const Index l = sub.order();
  const DifferenceCoordinates dc = difference_coordinates(net.M);
  const Matrix Minv = net.M.cwiseInverse().asDiagonal();
  const Matrix Ared = Eigen::kroneckerProduct(Matrix::Identity(n - 1, n - 1), sub.A) -
                      Eigen::kroneckerProduct(Matrix(dc.Sdag * net.L * Minv * dc.S),
                                              Matrix(sub.B * sub.C));
  const Matrix Bred = Eigen::kroneckerProduct(Matrix(dc.Sdag * net.F), sub.B);
  const Matrix Pbar = solve_lyapunov(Ared, Bred * Bred.transpose(), tol);
  // x = M^-1 S z + (consensus part), so vertex differences read out through
  // M^-1 S; validated against the quadrature oracle for nonuniform M.
  const Matrix MS = net.M.cwiseInverse().asDiagonal() * dc.S;

  auto fill = [&](Index i, Index j) {
    const Eigen::RowVectorXd row = (Vector::Unit(n, i) - Vector::Unit(n, j)).transpose() * MS;
    const Matrix Psi = Eigen::kroneckerProduct(row, sub.C);
    D(i, j) = D(j, i) = std::sqrt(std::max((Psi * Pbar * Psi.transpose()).trace(), 0.0));
  };
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  if (threads <= 1 || l * n < 64) {
    for (auto [i, j] : pairs) fill(i, j);
  } else {
    std::vector<std::thread> pool;
    const size_t per = (pairs.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const size_t lo = t * per, hi = std::min(pairs.size(), lo + per);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (size_t k = lo; k < hi; ++k) fill(pairs[k].first, pairs[k].second);
      });
    }
    for (auto& th : pool) th.join();
  }
  return D;
}

enum class Linkage { Average, Single, Complete };

struct DendrogramMerge {
  int a = 0, b = 0;    // clusters named by their smallest vertex id
  double value = 0.0;  // linkage value at the merge
};

struct HierarchicalResult {
  Clustering clustering;
  std::vector<DendrogramMerge> merges;
};

/// Hierarchical clustering: repeatedly merge the two clusters with minimal
/// linkage (average pairwise dissimilarity by default) until r remain.
/// Ties break toward the lexicographically smallest pair.
inline HierarchicalResult hierarchical_cluster(const Matrix& D, int r,
                                               Linkage linkage = Linkage::Average) {
  const int n = static_cast<int>(D.rows());
  if (D.cols() != n) throw InvalidInputError("hierarchical_cluster: D must be square");
  if (r < 1 || r > n) throw InvalidInputError("hierarchical_cluster: r out of range");

  std::vector<std::vector<int>> cells(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) cells[static_cast<size_t>(i)] = {i + 1};

  auto link = [&](const std::vector<int>& A, const std::vector<int>& B) {
    double acc = (linkage == Linkage::Single) ? std::numeric_limits<double>::infinity() : 0.0;
    for (int i : A)
      for (int j : B) {
        const double d = D(i - 1, j - 1);
        switch (linkage) {
          case Linkage::Average: acc += d; break;
          case Linkage::Single: acc = std::min(acc, d); break;
          case Linkage::Complete: acc = std::max(acc, d); break;
        }
      }
    if (linkage == Linkage::Average) acc /= double(A.size() * B.size());
    return acc;
  };

  HierarchicalResult out;
  while (static_cast<int>(cells.size()) > r) {
    size_t bk = 0, bl = 1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < cells.size(); ++k)
      for (size_t l = k + 1; l < cells.size(); ++l) {
        const double v = link(cells[k], cells[l]);
        if (v < best) {
          best = v;
          bk = k;
          bl = l;
        }
      }
    out.merges.push_back({cells[bk].front(), cells[bl].front(), best});
    cells[bk].insert(cells[bk].end(), cells[bl].begin(), cells[bl].end());
    std::sort(cells[bk].begin(), cells[bk].end());
    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(bl));
    // keep cells ordered by smallest member so tie-breaking stays lexicographic
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
  }
  std::vector<int> assign(static_cast<size_t>(n));
  for (size_t c = 0; c < cells.size(); ++c)
    for (int v : cells[c]) assign[static_cast<size_t>(v - 1)] = static_cast<int>(c) + 1;
  out.clustering = Clustering(std::move(assign));
  return out;
}

/// Reduction report shared by all reduction paths.
struct ReductionReport {
  std::string method;
  NetworkSystem reduced;
  Clustering clustering;
  std::optional<double> h2_error;
  std::optional<double> hinf_error;
  std::optional<double> bound;  // a-priori bound, in bound_norm
  std::string bound_norm;
  std::optional<double> gamma, gamma_s;
  std::vector<double> ghsv_network, ghsv_subsystem;
  bool h2_defined = true;
  bool steady_output_match = true;
  bool reduced_synchronizes = true;
  double chosen_lambda = 0.0, delta = 0.0, gamma_param = 0.0;
};

/// Projected reduced model plus the actually realized H2 error (via the
/// pseudo-Gramian trace on the stacked error system) and the steady-output
/// equality check of the impulse-limit lemma.
inline ReductionReport reduce_by_clustering(const NetworkSystem& net, const Clustering& c,
                                            const Tolerances& tol = default_tol()) {
  if (!check_synchronization(net, tol).synchronized)
    throw PreconditionError("reduce_by_clustering: network does not synchronize");
  ReductionReport rep;
  rep.method = "cluster";
  rep.clustering = c;
  rep.reduced = reduce_network(net, c);
  rep.reduced_synchronizes = check_synchronization(rep.reduced, tol).synchronized;
  if (net.single_integrator()) {
    const Matrix so = steady_output(net), sor = steady_output(rep.reduced);
    rep.steady_output_match = (so - sor).norm() <= 1e-9 * std::max(1.0, so.norm());
  }
  const StateSpace err = error_system(assemble(net), assemble(rep.reduced));
  const auto h2 = h2_norm_semistable(err, tol);
  rep.h2_defined = h2.has_value();
  rep.h2_error = h2;
  return rep;
}

/// LMI constant gamma of the clustering error bound for networks with full
/// state output (H = I) and a subsystem with A + A^T < 0 and square ports.
struct GammaBound {
  double gamma = 0.0;
  double bound = 0.0;  // gamma * sum_k |C_k| max_{i,j in C_k} D_ij
};

inline double errbound_gamma_constant(const NetworkSystem& net,
                                      const Tolerances& tol = default_tol()) {
  const Index n = net.vertices();
  if ((net.H - Matrix::Identity(n, n)).norm() > 1e-12)
    throw PreconditionError("errbound_gamma: requires H = I");
  const StateSpace sub = net.agent();
  const Index l = sub.order();
  if (sub.inputs() != l)
    throw PreconditionError("errbound_gamma: requires square subsystem ports (m = l)");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sub.A + sub.A.transpose(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().maxCoeff() >= 0.0)
    throw PreconditionError("errbound_gamma: requires A + A^T < 0");

  const Matrix In = Matrix::Identity(n, n);
  const Matrix Inl = Matrix::Identity(n * l, n * l);
  const Matrix BC = sub.B * sub.C;
  const Matrix sym = BC + BC.transpose();
  const Index N = n * l;
  Matrix M0 = Matrix::Zero(3 * N, 3 * N);
  M0.block(0, 0, N, N) = Eigen::kroneckerProduct(In, Matrix(sub.A + sub.A.transpose())) -
                         Eigen::kroneckerProduct(net.L, sym);
  M0.block(0, N, N, N) = Eigen::kroneckerProduct(net.L, BC);
  M0.block(N, 0, N, N) = M0.block(0, N, N, N).transpose();
  M0.block(0, 2 * N, N, N) = -Eigen::kroneckerProduct(In, Matrix(sub.C.transpose()));
  M0.block(2 * N, 0, N, N) = M0.block(0, 2 * N, N, N).transpose();
  M0.block(N, 2 * N, N, N) = Inl;
  M0.block(2 * N, N, N, N) = Inl;
  const auto res = lmi_gamma_bisect(M0, {N, N, N}, {false, true, true}, tol);
  if (!res.feasible) throw PreconditionError("errbound_gamma: LMI infeasible");
  return res.gamma;
}

inline GammaBound errbound_gamma(const NetworkSystem& net, const Clustering& c,
                                 const Matrix& D, const Tolerances& tol = default_tol()) {
  GammaBound out;
  out.gamma = errbound_gamma_constant(net, tol);
  double sum = 0.0;
  for (const auto& cell : c.cells()) {
    double worst = 0.0;
    for (size_t a = 0; a < cell.size(); ++a)
      for (size_t b = a + 1; b < cell.size(); ++b)
        worst = std::max(worst, D(cell[a] - 1, cell[b] - 1));
    sum += double(cell.size()) * worst;
  }
  out.bound = out.gamma * sum;
  return out;
}

/// gamma_s constant of the pseudo-Gramian bound for single-integrator
/// networks. The feasibility inequality is the full-network dissipation LMI
/// (storage z^T M_hat z); congruence by blkdiag(Pi, I, I) specializes it to
/// every clustering, so one constant serves them all. The structural null
/// directions (1, 0, 0) and (0, 1, 0) are deflated before bisection.
inline double errbound_pseudo_constant(const NetworkSystem& net,
                                       const Tolerances& tol = default_tol()) {
  if (!net.single_integrator())
    throw PreconditionError("errbound_pseudo: single-integrator form required");
  const Index n = net.vertices(), q = net.H.rows();
  const Matrix In = Matrix::Identity(n, n);
  const Matrix J = consensus_projector(net.M);
  const Matrix IJ = In - J;

  const Index N = 2 * n + q;
  Matrix M0 = Matrix::Zero(N, N), W = Matrix::Zero(N, N);
  M0.block(0, 0, n, n) = -2.0 * net.L;
  M0.block(0, n, n, n) = -net.L;
  M0.block(n, 0, n, n) = -net.L;
  M0.block(0, 2 * n, n, q) = IJ.transpose() * net.H.transpose();
  M0.block(2 * n, 0, q, n) = M0.block(0, 2 * n, n, q).transpose();
  M0.block(n, 2 * n, n, q) = IJ.transpose() * net.H.transpose();
  M0.block(2 * n, n, q, n) = M0.block(n, 2 * n, n, q).transpose();
  W.block(n, n, n, n) = IJ.transpose() * IJ;
  W.block(2 * n, 2 * n, q, q).setIdentity();

  Matrix null_dirs = Matrix::Zero(N, 2);
  null_dirs.block(0, 0, n, 1).setOnes();
  null_dirs.block(n, 1, n, 1).setOnes();
  const Matrix Z = Eigen::HouseholderQR<Matrix>(null_dirs)
                       .householderQ() *
                   Matrix::Identity(N, N).rightCols(N - 2);
  const auto res = lmi_gamma_bisect_weighted(Z.transpose() * M0 * Z, Z.transpose() * W * Z, tol);
  if (!res.feasible) throw PreconditionError("errbound_pseudo: LMI infeasible");
  return res.gamma;
}

struct PseudoBound {
  double gamma_s = 0.0;
  double bound = 0.0;  // gamma_s * sqrt(Tr((I - Pi Pi+) P (I - Pi Pi+)^T))
};

inline PseudoBound errbound_pseudo(const NetworkSystem& net, const Clustering& c,
                                   const Tolerances& tol = default_tol()) {
  PseudoBound out;
  out.gamma_s = errbound_pseudo_constant(net, tol);
  const Index n = net.vertices();
  const Matrix Pi = c.characteristic_matrix();
  const Matrix Mh = Pi.transpose() * net.M.asDiagonal() * Pi;
  const Matrix Pidag = Mh.ldlt().solve(Pi.transpose() * net.M.asDiagonal());
  const Matrix resid = Matrix::Identity(n, n) - Pi * Pidag;
  const Matrix P = single_integrator_pseudo_gramian(net, tol);
  out.bound = out.gamma_s * std::sqrt(std::max((resid * P * resid.transpose()).trace(), 0.0));
  return out;
}

/// Almost-equitable-partition H2 error: closed form
///   sum_i (1 - 1/|C_{k_i}|) / (p (1 - 1/n))
/// for binary leader inputs, output y = W^(1/2) R^T x, M = I; also returns
/// the directly computed relative error for cross-checking.
struct AepH2Result {
  double formula = 0.0;
  double direct = 0.0;  // ||S - S_hat||^2 / ||S||^2 via pseudo-Gramian traces
};

inline AepH2Result aep_h2_error(const WeightedGraph& g, const Clustering& c,
                                const std::vector<int>& leaders,
                                const Tolerances& tol = default_tol()) {
  const AepVerdict v = is_almost_equitable(g, c, tol);
  if (!v.is_aep)
    throw PreconditionError("aep_h2_error: partition is not almost equitable (violation " +
                            std::to_string(v.worst_violation) + ")");
  const int n = g.order();
  const int p = static_cast<int>(leaders.size());
  if (p == 0) throw InvalidInputError("aep_h2_error: at least one leader required");

  const auto cells = c.cells();
  double acc = 0.0;
  for (int v1 : leaders) {
    if (v1 < 1 || v1 > n) throw InvalidInputError("aep_h2_error: leader id out of range");
    acc += 1.0 - 1.0 / double(cells[static_cast<size_t>(c.cluster_of(v1) - 1)].size());
  }
  AepH2Result out;
  out.formula = acc / (double(p) * (1.0 - 1.0 / double(n)));

  NetworkSystem net;
  net.M = Vector::Ones(n);
  net.L = build_laplacian(g);
  net.F = Matrix::Zero(n, p);
  for (int k = 0; k < p; ++k) net.F(leaders[static_cast<size_t>(k)] - 1, k) = 1.0;
  const IncidencePair inc = incidence(g);
  net.H = inc.W.cwiseSqrt() * inc.R.transpose();

  const NetworkSystem red = reduce_network(net, c);
  const auto full = h2_norm_semistable(assemble(net), tol);
  const auto err = h2_norm_semistable(error_system(assemble(net), assemble(red)), tol);
  if (!full || !err) throw NumericalError("aep_h2_error: H2 norm undefined");
  out.direct = (*err) * (*err) / ((*full) * (*full));
  return out;
}

/// Almost-equitable-partition H-infinity error for output y = L x:
/// ||S - S_hat||_inf^2 = max_i (1 - 1/|C_{k_i}|) when the leaders occupy
/// distinct clusters, and 1 otherwise. Returns the norm (square root).
struct AepHinfResult {
  double formula = 0.0;  // the norm, i.e. sqrt of the squared expression
  double direct = 0.0;   // H-infinity norm on the deflated stable part
};

inline AepHinfResult aep_hinf_error(const WeightedGraph& g, const Clustering& c,
                                    const std::vector<int>& leaders,
                                    const Tolerances& tol = default_tol()) {
  const AepVerdict v = is_almost_equitable(g, c, tol);
  if (!v.is_aep) throw PreconditionError("aep_hinf_error: partition is not almost equitable");
  const int n = g.order();
  const auto cells = c.cells();
  std::vector<int> owner;
  double sq = 0.0;
  bool distinct = true;
  for (int v1 : leaders) {
    const int k = c.cluster_of(v1);
    if (std::find(owner.begin(), owner.end(), k) != owner.end()) distinct = false;
    owner.push_back(k);
    sq = std::max(sq, 1.0 - 1.0 / double(cells[static_cast<size_t>(k - 1)].size()));
  }
  if (!distinct) sq = 1.0;

  AepHinfResult out;
  out.formula = std::sqrt(sq);

  NetworkSystem net;
  net.M = Vector::Ones(n);
  net.L = build_laplacian(g);
  net.F = Matrix::Zero(n, static_cast<Index>(leaders.size()));
  for (size_t k = 0; k < leaders.size(); ++k) net.F(leaders[k] - 1, static_cast<Index>(k)) = 1.0;
  net.H = net.L;
  const NetworkSystem red = reduce_network(net, c);
  out.direct = hinf_norm_semistable(error_system(assemble(net), assemble(red)), tol);
  return out;
}

}  // namespace netred

#endif  // NETRED_CLUSTER_HPP
