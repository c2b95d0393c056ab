// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0
//
// Diffusively coupled network systems: assembly of the full state-space
// model, synchronization and semistability checks, steady-state output, and
// passivity certificates for the subsystem dynamics.

#ifndef NETRED_NETWORK_HPP
#define NETRED_NETWORK_HPP

#include <optional>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "netred/graph.hpp"
#include "netred/linsys.hpp"
#include "netred/types.hpp"

namespace netred {

/// Network system (M, L, F, H) with an optional identical subsystem
/// (A, B, C) at every vertex; absent subsystem means the single-integrator
/// form (A = 0, B = C = 1).
struct NetworkSystem {
  Vector M;  // positive diagonal vertex weights
  Matrix L;
  Matrix F;
  Matrix H;
  std::optional<StateSpace> subsystem;

  Index vertices() const { return L.rows(); }
  Index subsystem_order() const { return subsystem ? subsystem->order() : 1; }

  bool single_integrator() const { return !subsystem.has_value(); }

  StateSpace agent() const {
    if (subsystem) return *subsystem;
    return StateSpace(Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1));
  }

  void validate(const Tolerances& tol = default_tol()) const {
    const Index n = vertices();
    if (M.size() != n || F.rows() != n || H.cols() != n)
      throw InvalidInputError("NetworkSystem: dimension mismatch");
    if ((M.array() <= 0.0).any())
      throw InvalidInputError("NetworkSystem: vertex weights must be positive");
    const LaplacianCheck chk = check_laplacian(L, tol);
    if (!chk.valid)
      throw InvalidInputError("NetworkSystem: L is not a connected Laplacian");
    if (subsystem && subsystem->inputs() != subsystem->outputs())
      throw InvalidInputError("NetworkSystem: subsystem must have matching port dimensions");
  }
};

/// Full model: A = I (x) A - M^-1 L (x) BC, B = M^-1 F (x) B, C = H (x) C.
/// Single-integrator networks reduce to (-M^-1 L, M^-1 F, H).
inline StateSpace assemble(const NetworkSystem& net) {
  const Index n = net.vertices();
  const Matrix MinvL = net.M.cwiseInverse().asDiagonal() * net.L;
  const Matrix MinvF = net.M.cwiseInverse().asDiagonal() * net.F;
  if (net.single_integrator()) return StateSpace(-MinvL, MinvF, net.H);
  const StateSpace& sub = *net.subsystem;
  const Matrix In = Matrix::Identity(n, n);
  Matrix A = Eigen::kroneckerProduct(In, sub.A) - Eigen::kroneckerProduct(MinvL, sub.B * sub.C);
  Matrix B = Eigen::kroneckerProduct(MinvF, sub.B);
  Matrix C = Eigen::kroneckerProduct(net.H, sub.C);
  return StateSpace(std::move(A), std::move(B), std::move(C));
}

/// Ascending eigenvalues of M^-1 L (real; generalized symmetric problem).
inline Vector coupling_eigenvalues(const NetworkSystem& net) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(net.L, Matrix(net.M.asDiagonal()));
  return es.eigenvalues();
}

/// Synchronization test: A - lambda_k BC Hurwitz for every nonzero
/// eigenvalue lambda_k of M^-1 L.
struct SynchronizationVerdict {
  bool synchronized = false;
  double worst_abscissa = 0.0;  // max spectral abscissa over k >= 2
  Vector lambdas;
};

inline SynchronizationVerdict check_synchronization(const NetworkSystem& net,
                                                    const Tolerances& tol = default_tol()) {
  SynchronizationVerdict out;
  out.lambdas = coupling_eigenvalues(net);
  const StateSpace sub = net.agent();
  const Matrix BC = sub.B * sub.C;
  double worst = -std::numeric_limits<double>::infinity();
  for (Index k = 1; k < out.lambdas.size(); ++k)
    worst = std::max(worst, spectral_abscissa(sub.A - out.lambdas(k) * BC));
  out.worst_abscissa = worst;
  out.synchronized = worst < -1e-9;
  (void)tol;
  return out;
}

/// Steady output of a single-integrator network under impulse inputs:
/// H 1 1^T F / (1^T M 1).
inline Matrix steady_output(const NetworkSystem& net) {
  if (!net.single_integrator())
    throw PreconditionError("steady_output: single-integrator form required");
  const Index n = net.vertices();
  const Vector one = Vector::Ones(n);
  return (net.H * one) * (one.transpose() * net.F) / (one.dot(net.M.asDiagonal() * one));
}

/// Passivity certificate K > 0 with A^T K + K A <= 0 and C^T = K B, plus
/// optional extremal certificates used by the subsystem-reduction paths.
struct PassivityCertificate {
  Matrix K;
  std::optional<Matrix> K_min, K_max;
};

inline bool is_minimal(const StateSpace& sys, const Tolerances& tol = default_tol()) {
  const Index n = sys.order();
  Matrix ctrl(n, n * sys.inputs());
  Matrix obs(n * sys.outputs(), n);
  Matrix Ak = Matrix::Identity(n, n);
  for (Index k = 0; k < n; ++k) {
    ctrl.middleCols(k * sys.inputs(), sys.inputs()) = Ak * sys.B;
    obs.middleRows(k * sys.outputs(), sys.outputs()) = sys.C * Ak;
    Ak = sys.A * Ak;
  }
  auto rank = [&](const Matrix& M) {
    Eigen::JacobiSVD<Matrix> svd(M);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    Index r = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > tol.minimality_rank * std::max(smax, 1e-300)) ++r;
    return r;
  };
  return rank(ctrl) == n && rank(obs) == n;
}

enum class PassivityMode { Supplied, SymmetricCase };

/// Verifies a supplied certificate, or constructs K = I in the symmetric
/// case (A + A^T <= 0 and B = C^T). Throws when the certificate is invalid
/// or the symmetric case does not apply.
inline PassivityCertificate passivity_certificate(const StateSpace& sub, PassivityMode mode,
                                                  const Matrix* supplied_K = nullptr,
                                                  const Tolerances& tol = default_tol()) {
  if (!is_minimal(sub, tol))
    throw PreconditionError("passivity_certificate: realization not minimal");
  const Index l = sub.order();
  Matrix K;
  if (mode == PassivityMode::Supplied) {
    if (!supplied_K) throw InvalidInputError("passivity_certificate: K missing");
    K = *supplied_K;
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sub.A + sub.A.transpose(), Eigen::EigenvaluesOnly);
    const double scale = std::max(sub.A.norm(), 1.0);
    if (es.eigenvalues().maxCoeff() > 1e-9 * scale)
      throw PreconditionError("passivity_certificate: A + A^T not negative semidefinite");
    if ((sub.B - sub.C.transpose()).norm() > 1e-9 * std::max(sub.B.norm(), 1.0))
      throw PreconditionError("passivity_certificate: B != C^T, symmetric case inapplicable");
    K = Matrix::Identity(l, l);
  }
  Eigen::LLT<Matrix> llt(K);
  if (K.rows() != l || llt.info() != Eigen::Success)
    throw PreconditionError("passivity_certificate: K not positive definite");
  const double scaleK = std::max(1.0, K.norm() * std::max(sub.A.norm(), 1.0));
  Eigen::SelfAdjointEigenSolver<Matrix> res(
      sub.A.transpose() * K + K * sub.A, Eigen::EigenvaluesOnly);
  if (res.eigenvalues().maxCoeff() > 1e-9 * scaleK)
    throw PreconditionError("passivity_certificate: A^T K + K A not negative semidefinite");
  if ((sub.C.transpose() - K * sub.B).norm() >
      1e-9 * std::max(1.0, K.norm() * sub.B.norm()))
    throw PreconditionError("passivity_certificate: C^T = K B violated");
  PassivityCertificate out;
  out.K = K;
  if (mode == PassivityMode::SymmetricCase) {
    out.K_min = K;
    out.K_max = K;
  }
  return out;
}

/// Projected network per the Petrov-Galerkin scheme; subsystem carried over.
inline NetworkSystem reduce_network(const NetworkSystem& net, const Clustering& c) {
  const ProjectedMatrices pm =
      project_network(c, Matrix(net.M.asDiagonal()), net.L, net.F, net.H);
  NetworkSystem out;
  out.M = pm.M.diagonal();
  out.L = pm.L;
  out.F = pm.F;
  out.H = pm.H;
  out.subsystem = net.subsystem;
  return out;
}

}  // namespace netred

#endif  // NETRED_NETWORK_HPP
