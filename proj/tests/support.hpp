// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared test fixtures and independent oracles. The oracles deliberately
// avoid the library's solver paths: Gramians by quadrature of the matrix
// exponential, H2 norms by impulse-response integration, H-infinity norms by
// dense frequency sweeps.

#ifndef NETRED_TESTS_SUPPORT_HPP
#define NETRED_TESTS_SUPPORT_HPP

#include <random>
#include <set>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "netred/netred.hpp"

namespace netred::testing {

// ---------------------------------------------------------------- fixtures

/// The five-node mass-damper network: weights 3,1,2,1,2,3,1 on edges
/// (1,2),(2,3),(1,4),(1,5),(3,4),(3,5),(4,5); forces on mass 1 and on
/// masses 4+5 (the combination consistent with the printed reduced input
/// matrix and the dissimilarity table).
inline WeightedGraph example1_graph() {
  return WeightedGraph(5, {{1, 2, 3}, {2, 3, 1}, {1, 4, 2}, {1, 5, 1}, {3, 4, 2},
                           {3, 5, 3}, {4, 5, 1}});
}

inline NetworkSystem example1_network() {
  NetworkSystem net;
  net.M = Vector::Ones(5);
  net.L = build_laplacian(example1_graph());
  net.F = Matrix::Zero(5, 2);
  net.F(0, 0) = 1.0;
  net.F(3, 1) = 1.0;
  net.F(4, 1) = 1.0;
  net.H = Matrix::Identity(5, 5);
  return net;
}

inline Clustering example1_clustering() { return Clustering({1, 1, 2, 3, 2}); }

/// Six-node network whose quotient under {{1,2},{3},{4},{5,6}} has edges
/// (1,2),(1,3),(2,4),(3,4): input at vertex 3, output at vertex 4.
inline WeightedGraph example34_graph() {
  return WeightedGraph(6, {{1, 2, 1}, {2, 3, 1}, {1, 4, 1}, {3, 5, 1}, {4, 6, 1},
                           {5, 6, 1}});
}

inline NetworkSystem example34_network() {
  NetworkSystem net;
  net.M = Vector::Ones(6);
  net.L = build_laplacian(example34_graph());
  net.F = Matrix::Zero(6, 1);
  net.F(2, 0) = 1.0;
  net.H = Matrix::Zero(1, 6);
  net.H(0, 3) = 1.0;
  return net;
}

inline Clustering example34_clustering() { return Clustering({1, 1, 2, 3, 4, 4}); }

// ------------------------------------------------------------- generators

using Rng = std::mt19937;

inline WeightedGraph random_connected_graph(Rng& rng, int n, double extra_edges = 0.6) {
  std::uniform_real_distribution<double> wdist(0.2, 2.0);
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i + 1;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::set<std::pair<int, int>> used;
  std::vector<Edge> edges;
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    int a = perm[static_cast<size_t>(pick(rng))], b = perm[static_cast<size_t>(k)];
    if (a > b) std::swap(a, b);
    used.insert({a, b});
    edges.push_back({a, b, wdist(rng)});
  }
  const int want = static_cast<int>(extra_edges * n);
  std::uniform_int_distribution<int> vdist(1, n);
  for (int t = 0; t < want; ++t) {
    int a = vdist(rng), b = vdist(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (used.insert({a, b}).second) edges.push_back({a, b, wdist(rng)});
  }
  return WeightedGraph(n, edges);
}

inline WeightedGraph random_tree(Rng& rng, int n) {
  std::uniform_real_distribution<double> wdist(0.3, 2.0);
  std::vector<Edge> edges;
  for (int k = 2; k <= n; ++k) {
    std::uniform_int_distribution<int> pick(1, k - 1);
    int a = pick(rng), b = k;
    edges.push_back({a, b, wdist(rng)});
  }
  return WeightedGraph(n, edges);
}

inline Clustering random_clustering(Rng& rng, int n, int r) {
  std::uniform_int_distribution<int> cdist(1, r);
  for (;;) {
    std::vector<int> a(static_cast<size_t>(n));
    std::set<int> seen;
    for (int i = 0; i < n; ++i) seen.insert(a[static_cast<size_t>(i)] = cdist(rng));
    if (static_cast<int>(seen.size()) == r) return Clustering(std::move(a));
  }
}

inline Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = g(rng);
  return M;
}

inline Matrix random_hurwitz(Rng& rng, Index n, double margin = 0.3) {
  const Matrix G = random_matrix(rng, n, n);
  const Matrix S = random_matrix(rng, n, n);
  return -(G * G.transpose()) - margin * Matrix::Identity(n, n) +
         0.5 * (S - S.transpose());
}

/// Random semistable A with kernel dimension d and C J B = 0 enforced by
/// projecting B.
struct SemistableSystem {
  StateSpace sys;
  Matrix J;
};

inline SemistableSystem random_semistable(Rng& rng, Index n, Index d, Index p = 2,
                                          Index q = 2) {
  Matrix V = random_matrix(rng, n, n);
  while (std::abs(V.determinant()) < 1e-3) V = random_matrix(rng, n, n);
  Matrix D = Matrix::Zero(n, n);
  const Matrix G = random_matrix(rng, n - d, n - d);
  D.topLeftCorner(n - d, n - d) = -(G * G.transpose()) - 0.3 * Matrix::Identity(n - d, n - d);
  const Matrix Vi = V.inverse();
  const Matrix A = V * D * Vi;
  Matrix Jd = Matrix::Zero(n, n);
  Jd.bottomRightCorner(d, d).setIdentity();
  const Matrix J = V * Jd * Vi;
  Matrix B = (Matrix::Identity(n, n) - J) * random_matrix(rng, n, p);
  const Matrix C = random_matrix(rng, q, n);
  return {StateSpace(A, B, C), J};
}

/// Random passive subsystem with K = I (A + A^T < 0 strictly, B = C^T).
inline StateSpace random_passive(Rng& rng, Index l, Index m = 1, double margin = 0.4) {
  const Matrix G = random_matrix(rng, l, l);
  const Matrix skew = random_matrix(rng, l, l);
  const Matrix A =
      -(G * G.transpose()) - margin * Matrix::Identity(l, l) + 0.5 * (skew - skew.transpose());
  Matrix B = random_matrix(rng, l, m);
  return StateSpace(A, B, B.transpose());
}

/// Binary leader-selection input: p distinct vertices.
inline Matrix random_leader_input(Rng& rng, int n, int p) {
  std::vector<int> verts(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) verts[static_cast<size_t>(i)] = i;
  std::shuffle(verts.begin(), verts.end(), rng);
  Matrix F = Matrix::Zero(n, p);
  for (int k = 0; k < p; ++k) F(verts[static_cast<size_t>(k)], k) = 1.0;
  return F;
}

// ---------------------------------------------------------------- oracles

/// Controllability Gramian by composite-Simpson quadrature of
/// int_0^T e^{At} S e^{A^T t} dt (stable A; T from the spectral abscissa).
inline Matrix gramian_quadrature(const Matrix& A, const Matrix& S, double T = -1.0,
                                 int intervals = 65536) {
  const Index n = A.rows();
  if (T <= 0.0) {
    const double alpha = -spectral_abscissa(A);
    T = 50.0 / std::max(alpha, 1e-6);
  }
  const double h = T / intervals;
  const Matrix E = (A * h).exp();
  Matrix Ek = Matrix::Identity(n, n);
  Matrix acc = Matrix::Zero(n, n);
  for (int k = 0; k <= intervals; ++k) {
    const Matrix term = Ek * S * Ek.transpose();
    const double wgt = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += wgt * term;
    Ek = Ek * E;
  }
  return acc * (h / 3.0);
}

/// Squared H2 norm by impulse-response quadrature:
/// int_0^T || C e^{At} B - C J B ||_F^2 dt with the tail below 1e-10.
inline double h2_squared_quadrature(const StateSpace& sys, const Matrix& J,
                                    int intervals = 65536) {
  const Index n = sys.order();
  const Matrix CJB = sys.C * J * sys.B;
  double alpha = 1e9;
  Eigen::EigenSolver<Matrix> es(sys.A, false);
  for (Index i = 0; i < n; ++i) {
    const auto lam = es.eigenvalues()(i);
    if (std::abs(lam) > 1e-9) alpha = std::min(alpha, -lam.real());
  }
  const double T = 60.0 / std::max(alpha, 1e-6);
  const double h = T / intervals;
  const Matrix E = (sys.A * h).exp();
  Matrix Ek = Matrix::Identity(n, n);
  double acc = 0.0;
  for (int k = 0; k <= intervals; ++k) {
    const double v = (sys.C * Ek * sys.B - CJB).squaredNorm();
    const double wgt = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += wgt * v;
    Ek = Ek * E;
  }
  return acc * (h / 3.0);
}

/// Dense frequency-sweep lower estimate of the H-infinity norm.
inline double hinf_sweep(const StateSpace& sys, double wmax = 1e4, int samples = 3000) {
  return hinf_freq_sweep(sys, wmax, samples);
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace netred::testing

#endif  // NETRED_TESTS_SUPPORT_HPP
