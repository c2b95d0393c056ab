// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0
//
// Edge weighting on a fixed quotient topology: the reduced model keeps
// M_hat, F_hat, H_hat from the clustering projection while the quotient edge
// weights are free, and the exact H2 error to the full network is minimized
// by projected gradient descent with analytic gradients.

#ifndef NETRED_WEIGHTS_HPP
#define NETRED_WEIGHTS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netred/cluster.hpp"
#include "netred/graph.hpp"
#include "netred/linsys.hpp"
#include "netred/network.hpp"
#include "netred/types.hpp"

namespace netred {

/// Reduced model on the quotient topology with free edge weights:
/// M_hat zdot = -R_hat W_hat R_hat^T z + F_hat u, y_hat = H_hat z.
struct ParameterizedReducedModel {
  QuotientGraph quotient;
  Vector M_hat;  // diagonal
  Matrix F_hat, H_hat;
  Vector w0;  // aggregate crossing weights (projection baseline)

  Matrix laplacian(const Vector& w) const {
    return quotient.R_hat * w.asDiagonal() * quotient.R_hat.transpose();
  }

  NetworkSystem network(const Vector& w) const {
    NetworkSystem out;
    out.M = M_hat;
    out.L = laplacian(w);
    out.F = F_hat;
    out.H = H_hat;
    return out;
  }
};

inline ParameterizedReducedModel parameterize(const NetworkSystem& net, const WeightedGraph& g,
                                              const Clustering& c) {
  if (!net.single_integrator())
    throw PreconditionError("parameterize: single-integrator form required");
  ParameterizedReducedModel m;
  m.quotient = quotient_graph(g, c);
  const Matrix Pi = c.characteristic_matrix();
  m.M_hat = (Pi.transpose() * net.M.asDiagonal() * Pi).diagonal();
  m.F_hat = Pi.transpose() * net.F;
  m.H_hat = net.H * Pi;
  m.w0 = Eigen::Map<const Vector>(m.quotient.aggregate_weight.data(),
                                  static_cast<Index>(m.quotient.aggregate_weight.size()));
  return m;
}

namespace detail {

// Shared pieces of the error-system H2 value/gradient at a given weight
// vector: semistable error system, projected Lyapunov solutions.
struct WeightObjective {
  const NetworkSystem* net;
  const ParameterizedReducedModel* model;
  Matrix A_full, B_full, C_full;  // fixed full-system parts
  Matrix Je;                      // steady-state projector of the error system (constant)
  Matrix Xi;                      // C^T C - Je^T C^T C Je

  WeightObjective(const NetworkSystem& n, const ParameterizedReducedModel& m) {
    net = &n;
    model = &m;
    const StateSpace full = assemble(n);
    A_full = full.A;
    B_full = full.B;
    C_full = full.C;
    const Index nn = n.vertices(), r = m.M_hat.size();
    const Matrix Jn = consensus_projector(n.M);
    const Matrix Jr = consensus_projector(m.M_hat);
    Je = Matrix::Zero(nn + r, nn + r);
    Je.topLeftCorner(nn, nn) = Jn;
    Je.bottomRightCorner(r, r) = Jr;
    Matrix C(C_full.rows(), nn + r);
    C << C_full, -m.H_hat;
    const Matrix CtC = C.transpose() * C;
    Xi = CtC - Je.transpose() * CtC * Je;
  }

  StateSpace error_sys(const Vector& w) const {
    const Index nn = net->vertices(), r = model->M_hat.size();
    Matrix A = Matrix::Zero(nn + r, nn + r);
    A.topLeftCorner(nn, nn) = A_full;
    A.bottomRightCorner(r, r) =
        model->M_hat.cwiseInverse().asDiagonal() * (-model->laplacian(w));
    Matrix B(nn + r, B_full.cols());
    B << B_full, model->M_hat.cwiseInverse().asDiagonal() * model->F_hat;
    Matrix C(C_full.rows(), nn + r);
    C << C_full, -model->H_hat;
    return {A, B, C};
  }
};

}  // namespace detail

/// Exact H2 error || S - S_p ||_H2 of the parameterized model at weights w.
/// Requires C J B = 0 on the stacked error system (the impulse-limit lemma
/// guarantees this for projection-consistent M_hat, F_hat, H_hat).
inline double h2_error(const NetworkSystem& net, const ParameterizedReducedModel& model,
                       const Vector& w, const Tolerances& tol = default_tol()) {
  detail::WeightObjective obj(net, model);
  const auto value = h2_norm_semistable(obj.error_sys(w), tol);
  if (!value)
    throw PreconditionError("h2_error: C J B != 0 (inconsistent M_hat/F_hat/H_hat)");
  return *value;
}

/// Analytic gradient of the squared H2 error with respect to the edge
/// weights, from the two projected Lyapunov solutions on the error system:
///   dJ/dw_k = -2 [ R_hat^T Z_rr M_hat^-1 R_hat ]_kk,  Z = Pt Qt.
inline Vector h2_error_gradient(const NetworkSystem& net, const ParameterizedReducedModel& model,
                                const Vector& w, const Tolerances& tol = default_tol()) {
  detail::WeightObjective obj(net, model);
  const StateSpace err = obj.error_sys(w);
  const Index N = err.order(), nn = net.vertices(), r = model.M_hat.size();
  const Semistability ss = semistability_check(err.A, tol);
  if (!ss.semistable) throw PreconditionError("h2_error_gradient: error system not semistable");
  const Matrix Bp = (Matrix::Identity(N, N) - obj.Je) * err.B;
  const Matrix Pt = solve_lyapunov_semistable(err.A, Bp * Bp.transpose(), ss, tol);
  Semistability ssT = ss;
  ssT.J = ss.J.transpose();
  ssT.W = ss.Winv.transpose();
  ssT.Winv = ss.W.transpose();
  ssT.A1 = ss.A1.transpose();
  const Matrix Qt = solve_lyapunov_semistable(err.A.transpose(), obj.Xi, ssT, tol);
  const Matrix Zrr = (Pt * Qt).block(nn, nn, r, r);
  const Matrix G = model.quotient.R_hat.transpose() * Zrr *
                   model.M_hat.cwiseInverse().asDiagonal() * model.quotient.R_hat;
  return -2.0 * G.diagonal();
}

struct OptimizeConfig {
  int max_iterations = 500;
  double rel_tolerance = 1e-8;
  double w_min_scale = 1e-6;  // w_min = scale * mean(initial weights)
  double armijo = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
};

struct OptimizeResult {
  Vector weights;
  std::vector<double> objective_trace;  // H2 errors of accepted iterates
  double baseline = 0.0;                // clustering-projection error
  int iterations = 0;
};

/// Projected gradient descent on the exact H2 error, starting from the
/// clustering baseline, with Armijo backtracking and clamping to w >= w_min.
/// The objective trace is non-increasing; the best iterate is returned.
inline OptimizeResult optimize_weights(const NetworkSystem& net,
                                       const ParameterizedReducedModel& model,
                                       const OptimizeConfig& cfg = {},
                                       const Tolerances& tol = default_tol()) {
  const double w_min = cfg.w_min_scale * model.w0.mean();
  Vector w = model.w0.cwiseMax(w_min);

  auto value = [&](const Vector& x) {
    const double v = h2_error(net, model, x, tol);
    return v * v;
  };

  OptimizeResult out;
  double J = value(w);
  out.baseline = std::sqrt(J);
  out.objective_trace.push_back(std::sqrt(J));

  for (int it = 0; it < cfg.max_iterations; ++it) {
    const Vector grad = h2_error_gradient(net, model, w, tol);
    if (grad.norm() <= 1e-12 * std::max(1.0, J)) break;
    double step = cfg.initial_step / std::max(grad.norm(), 1e-12);
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      const Vector cand = (w - step * grad).cwiseMax(w_min);
      const Vector dir = cand - w;
      if (dir.norm() < 1e-15 * std::max(1.0, w.norm())) break;
      const double Jc = value(cand);
      if (Jc <= J + cfg.armijo * grad.dot(dir)) {
        const double rel = (J - Jc) / std::max(J, 1e-300);
        w = cand;
        J = Jc;
        out.objective_trace.push_back(std::sqrt(J));
        accepted = true;
        out.iterations = it + 1;
        if (rel <= cfg.rel_tolerance) it = cfg.max_iterations;  // converged
        break;
      }
      step *= cfg.backtrack;
    }
    if (!accepted) break;
  }
  out.weights = w;
  return out;
}

}  // namespace netred

#endif  // NETRED_WEIGHTS_HPP
