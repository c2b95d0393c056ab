// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense linear-system kernels: Lyapunov solvers (Bartels-Stewart on the real
// Schur form), semistability analysis and pseudo Gramians, H2/H-infinity
// norms, generalized balancing/truncation, algebraic Riccati extremal
// solutions, and gamma-bisection for affine matrix inequalities.

#ifndef NETRED_LINSYS_HPP
#define NETRED_LINSYS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "netred/types.hpp"

namespace netred {

struct StateSpace {
  Matrix A, B, C;

  StateSpace() = default;
  StateSpace(Matrix A_, Matrix B_, Matrix C_)
      : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)) {
    if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.cols())
      throw InvalidInputError("StateSpace: inconsistent dimensions");
  }

  Index order() const { return A.rows(); }
  Index inputs() const { return B.cols(); }
  Index outputs() const { return C.rows(); }

  Eigen::MatrixXcd transfer(std::complex<double> s) const {
    Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(order(), order()) - A;
    return C * M.lu().solve(Eigen::MatrixXcd(B));
  }
};

/// Error system between two systems with matching input/output dimensions:
/// block-diagonal dynamics, stacked input, output difference.
inline StateSpace error_system(const StateSpace& g, const StateSpace& h) {
  if (g.inputs() != h.inputs() || g.outputs() != h.outputs())
    throw InvalidInputError("error_system: port dimension mismatch");
  const Index n1 = g.order(), n2 = h.order();
  Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
  A.topLeftCorner(n1, n1) = g.A;
  A.bottomRightCorner(n2, n2) = h.A;
  Matrix B(n1 + n2, g.inputs());
  B << g.B, h.B;
  Matrix C(g.outputs(), n1 + n2);
  C << g.C, -h.C;
  return {A, B, C};
}

inline double spectral_abscissa(const Matrix& A) {
  if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
  return Eigen::EigenSolver<Matrix>(A, false).eigenvalues().real().maxCoeff();
}

inline bool is_hurwitz(const Matrix& A, double margin = 1e-12) {
  return spectral_abscissa(A) < -margin;
}

namespace detail {

// Solves the small Sylvester block T_ii Y + Y T_jj^T = R (sizes <= 2).
inline Matrix small_sylvester(const Matrix& Tii, const Matrix& Tjj, const Matrix& R) {
  const Index p = Tii.rows(), q = Tjj.rows();
  Matrix K = Matrix::Zero(p * q, p * q);
  // vec(T_ii Y) = (I_q x T_ii) vec(Y); vec(Y T_jj^T) = (T_jj x I_p) vec(Y)
  for (Index c = 0; c < q; ++c) K.block(c * p, c * p, p, p) = Tii;
  for (Index a = 0; a < q; ++a)
    for (Index b = 0; b < q; ++b)
      K.block(a * p, b * p, p, p) += Tjj(a, b) * Matrix::Identity(p, p);
  Vector rhs(p * q);
  for (Index c = 0; c < q; ++c) rhs.segment(c * p, p) = R.col(c);
  Vector y = K.fullPivLu().solve(rhs);
  Matrix Y(p, q);
  for (Index c = 0; c < q; ++c) Y.col(c) = y.segment(c * p, p);
  return Y;
}

// Block partition of a real Schur form (1x1 and 2x2 bumps).
inline std::vector<std::pair<Index, Index>> schur_blocks(const Matrix& T) {
  std::vector<std::pair<Index, Index>> blocks;  // (start, size)
  const Index n = T.rows();
  Index i = 0;
  while (i < n) {
    if (i + 1 < n && std::abs(T(i + 1, i)) > 0.0) {
      blocks.emplace_back(i, 2);
      i += 2;
    } else {
      blocks.emplace_back(i, 1);
      i += 1;
    }
  }
  return blocks;
}

// Solves T Y + Y T^T + S = 0 for T in real Schur form. Since T is block
// upper triangular, block (i, j) depends only on blocks in later rows and
// later columns, so both loops run backwards.
inline Matrix schur_lyap(const Matrix& T, const Matrix& S) {
  const Index n = T.rows();
  const auto blocks = schur_blocks(T);
  const Index nb = static_cast<Index>(blocks.size());
  Matrix Y = Matrix::Zero(n, n);
  for (Index jb = nb - 1; jb >= 0; --jb) {
    const auto [j0, nj] = blocks[static_cast<size_t>(jb)];
    for (Index ib = nb - 1; ib >= 0; --ib) {
      const auto [i0, ni] = blocks[static_cast<size_t>(ib)];
      Matrix R = -S.block(i0, j0, ni, nj);
      const Index below = n - (i0 + ni);
      if (below > 0)
        R -= T.block(i0, i0 + ni, ni, below) * Y.block(i0 + ni, j0, below, nj);
      const Index right = n - (j0 + nj);
      if (right > 0)
        R -= Y.block(i0, j0 + nj, ni, right) * T.block(j0, j0 + nj, nj, right).transpose();
      Y.block(i0, j0, ni, nj) =
          small_sylvester(T.block(i0, i0, ni, ni), T.block(j0, j0, nj, nj), R);
    }
  }
  return Y;
}

}  // namespace detail

/// Bartels-Stewart solve of A X + X A^T + S = 0 for Hurwitz A.
inline Matrix solve_lyapunov(const Matrix& A, const Matrix& S,
                             const Tolerances& tol = default_tol()) {
  if (A.rows() != A.cols() || S.rows() != A.rows() || S.cols() != A.cols())
    throw InvalidInputError("solve_lyapunov: dimension mismatch");
  const double abscissa = spectral_abscissa(A);
  if (!(abscissa < 0.0))
    throw PreconditionError("solve_lyapunov: A is not Hurwitz (spectral abscissa " +
                            std::to_string(abscissa) + ")");
  Eigen::RealSchur<Matrix> schur(A);
  const Matrix& U = schur.matrixU();
  const Matrix St = U.transpose() * S * U;
  Matrix Y = detail::schur_lyap(schur.matrixT(), St);
  Matrix X = U * Y * U.transpose();
  if (S.isApprox(S.transpose(), 1e-12)) X = 0.5 * (X + X.transpose());
  const double resid = (A * X + X * A.transpose() + S).norm();
  const double scale = A.norm() * X.norm() + S.norm();
  if (resid > 1e3 * tol.lyap_residual * std::max(scale, 1.0))
    throw NumericalError("solve_lyapunov: residual " + std::to_string(resid));
  return X;
}

/// Semistability verdict together with the steady-state projector
/// J = lim e^{At} (spectral projector onto ker A along im A).
struct Semistability {
  bool semistable = false;
  Index kernel_dim = 0;
  double worst_nonzero_real = 0.0;  // max Re over eigenvalues outside the zero group
  Matrix J;
  // Decoupling basis: A = W blkdiag(A1, 0) W^-1 with A1 Hurwitz.
  Matrix W, Winv, A1;
};

inline Semistability semistability_check(const Matrix& A,
                                         const Tolerances& tol = default_tol()) {
  if (A.rows() != A.cols()) throw InvalidInputError("semistability_check: square input required");
  const Index n = A.rows();
  Semistability out;
  const double scale = std::max(A.norm(), 1e-300);
  const double eps = tol.semistable_rank * scale;

  Eigen::EigenSolver<Matrix> es(A, false);
  Index alg_zero = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const std::complex<double> lam = es.eigenvalues()(i);
    if (std::abs(lam) <= eps)
      ++alg_zero;
    else
      worst = std::max(worst, lam.real());
  }
  out.worst_nonzero_real = (alg_zero == n) ? 0.0 : worst;

  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Index rank = 0;
  const double smax = n > 0 ? svd.singularValues()(0) : 0.0;
  for (Index i = 0; i < n; ++i)
    if (svd.singularValues()(i) > tol.semistable_rank * std::max(smax, 1e-300)) ++rank;
  const Index geo_zero = n - rank;

  out.kernel_dim = alg_zero;
  const bool others_stable = (alg_zero == n) || (worst < -eps);
  out.semistable = (geo_zero == alg_zero) && others_stable;
  if (!out.semistable) return out;

  const Index d = alg_zero, p = rank;
  if (d == 0) {
    out.J = Matrix::Zero(n, n);
    out.W = out.Winv = Matrix::Identity(n, n);
    out.A1 = A;
    return out;
  }
  // ker(A) and im(A) are complementary invariant subspaces (zero semisimple).
  const Matrix K = svd.matrixV().rightCols(d);   // ker(A)
  const Matrix Qim = svd.matrixU().leftCols(p);  // im(A)
  Matrix W(n, n);
  W << Qim, K;
  Eigen::FullPivLU<Matrix> lu(W);
  if (!lu.isInvertible())
    throw NumericalError("semistability_check: degenerate kernel/image split");
  out.W = W;
  out.Winv = lu.inverse();
  out.A1 = (out.Winv * A * W).topLeftCorner(p, p);
  Matrix D = Matrix::Zero(n, n);
  D.bottomRightCorner(d, d).setIdentity();
  out.J = W * D * out.Winv;
  return out;
}

/// One symmetric solution of A X + X A^T + S = 0 for semistable A, with the
/// free component along ker(A) x ker(A^T) set to zero (minimal-norm
/// convention). S must be symmetric and solvable (its kernel-kernel part in
/// the decoupling basis must vanish).
inline Matrix solve_lyapunov_semistable(const Matrix& A, const Matrix& S,
                                        const Semistability& ss,
                                        const Tolerances& tol = default_tol()) {
  if (!ss.semistable) throw PreconditionError("solve_lyapunov_semistable: A not semistable");
  const Index n = A.rows(), d = ss.kernel_dim, p = n - d;
  if (d == 0) return solve_lyapunov(A, S, tol);
  const Matrix St = ss.Winv * S * ss.Winv.transpose();
  const double scale = std::max({S.norm(), 1.0});
  if (d > 0 && St.bottomRightCorner(d, d).norm() > 1e3 * tol.lyap_residual * scale)
    throw PreconditionError("solve_lyapunov_semistable: kernel-kernel component of S nonzero");
  Matrix Y = Matrix::Zero(n, n);
  if (p > 0) {
    Y.topLeftCorner(p, p) = solve_lyapunov(ss.A1, St.topLeftCorner(p, p), tol);
    if (d > 0) {
      // A1 Y12 + S12 = 0
      Y.topRightCorner(p, d) = ss.A1.fullPivLu().solve(-St.topRightCorner(p, d));
      Y.bottomLeftCorner(d, p) = Y.topRightCorner(p, d).transpose();
    }
  }
  Matrix X = ss.W * Y * ss.W.transpose();
  return 0.5 * (X + X.transpose());
}

inline Matrix solve_lyapunov_semistable(const Matrix& A, const Matrix& S,
                                        const Tolerances& tol = default_tol()) {
  return solve_lyapunov_semistable(A, S, semistability_check(A, tol), tol);
}

/// Pseudo Gramians of a semistable realization: P, Q as the Gramian integrals
/// with the steady-state projector removed, computed as P = Pt - J Pt J^T
/// from any symmetric solution Pt of the projected Lyapunov equation.
struct PseudoGramianPair {
  Matrix P, Q, J;
};

inline PseudoGramianPair pseudo_gramians(const StateSpace& sys,
                                         const Tolerances& tol = default_tol()) {
  const Semistability ss = semistability_check(sys.A, tol);
  if (!ss.semistable) throw PreconditionError("pseudo_gramians: system not semistable");
  const Index n = sys.order();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix Bp = (I - ss.J) * sys.B;
  const Matrix Cp = sys.C * (I - ss.J);
  Matrix Pt = solve_lyapunov_semistable(sys.A, Bp * Bp.transpose(), ss, tol);
  Matrix P = Pt - ss.J * Pt * ss.J.transpose();

  Semistability ssT = ss;
  ssT.J = ss.J.transpose();
  ssT.W = ss.Winv.transpose();
  ssT.Winv = ss.W.transpose();
  ssT.A1 = ss.A1.transpose();
  Matrix Qt = solve_lyapunov_semistable(sys.A.transpose(), Cp.transpose() * Cp, ssT, tol);
  Matrix Q = Qt - ss.J.transpose() * Qt * ss.J;
  return {0.5 * (P + P.transpose()), 0.5 * (Q + Q.transpose()), ss.J};
}

/// H2 norm of a semistable system. Returns nullopt ("not in H2") when the
/// steady-state residue C J B does not vanish; otherwise the two trace
/// formulas Tr(C P C^T) = Tr(B^T Q B) are cross-checked and the norm returned.
inline std::optional<double> h2_norm_semistable(const StateSpace& sys,
                                                const Tolerances& tol = default_tol()) {
  const PseudoGramianPair g = pseudo_gramians(sys, tol);
  const double residue = (sys.C * g.J * sys.B).norm();
  const double scale =
      std::max(1.0, sys.C.norm() * std::max(g.J.norm(), 1.0) * sys.B.norm());
  if (residue > tol.h2_membership * scale) return std::nullopt;
  const double t1 = (sys.C * g.P * sys.C.transpose()).trace();
  const double t2 = (sys.B.transpose() * g.Q * sys.B).trace();
  const double ref = std::max({std::abs(t1), std::abs(t2), 1e-300});
  if (std::abs(t1 - t2) > std::max(1e4 * tol.h2_trace_agree * ref, 1e-13))
    throw NumericalError("h2_norm_semistable: trace formulas disagree (" +
                         std::to_string(t1) + " vs " + std::to_string(t2) + ")");
  return std::sqrt(std::max(0.5 * (t1 + t2), 0.0));
}

namespace detail {

inline bool hamiltonian_has_imag_axis_eig(const Matrix& H, double tol_rel) {
  Eigen::EigenSolver<Matrix> es(H, false);
  for (Index i = 0; i < H.rows(); ++i) {
    const std::complex<double> lam = es.eigenvalues()(i);
    if (std::abs(lam.real()) <= tol_rel * std::max(1.0, std::abs(lam))) return true;
  }
  return false;
}

}  // namespace detail

/// Largest singular value of the transfer over a frequency grid. Diagnostic
/// oracle; the certified computation is hinf_norm below.
inline double hinf_freq_sweep(const StateSpace& sys, double wmax = 1e4,
                              int samples = 2000) {
  double best = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double w =
        (k == 0) ? 0.0 : std::pow(10.0, -6.0 + (std::log10(wmax) + 6.0) * (k - 1) / (samples - 1));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.transfer({0.0, w}));
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

/// H-infinity norm of a stable system by gamma-bisection with the
/// imaginary-axis Hamiltonian eigenvalue test.
inline double hinf_norm(const StateSpace& sys, const Tolerances& tol = default_tol()) {
  if (sys.order() == 0) return 0.0;
  const double abscissa = spectral_abscissa(sys.A);
  if (!(abscissa < 0.0))
    throw PreconditionError("hinf_norm: A is not Hurwitz (spectral abscissa " +
                            std::to_string(abscissa) + ")");
  const Index n = sys.order();
  const Matrix BBt = sys.B * sys.B.transpose();
  const Matrix CtC = sys.C.transpose() * sys.C;

  // lower bound from a frequency sample (always <= the norm)
  double lo = 0.0;
  for (int k = 0; k < 40; ++k) {
    const double w = (k == 0) ? 0.0 : std::pow(10.0, -5.0 + 10.0 * (k - 1) / 38.0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.transfer({0.0, w}));
    lo = std::max(lo, svd.singularValues()(0));
  }
  if (lo < 1e-300) return 0.0;

  auto exceeds = [&](double gamma) {
    Matrix H(2 * n, 2 * n);
    H << sys.A, BBt / gamma, -CtC / gamma, -sys.A.transpose();
    return detail::hamiltonian_has_imag_axis_eig(H, tol.hinf_imag_axis);
  };

  double hi = 2.0 * lo;
  int guard = 0;
  while (exceeds(hi) && guard++ < 60) hi *= 2.0;
  if (guard >= 60) throw NumericalError("hinf_norm: upper bound search failed");
  lo = std::max(lo * 0.5, hi / 4.0);
  while ((hi - lo) > tol.hinf_rel * hi) {
    const double mid = 0.5 * (lo + hi);
    if (exceeds(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// H-infinity norm allowing semistable realizations whose marginal (zero)
/// modes are unobservable/uncontrollable in the transfer: requires the
/// steady-state residue C J B to vanish, then deflates to the stable part.
inline double hinf_norm_semistable(const StateSpace& sys,
                                   const Tolerances& tol = default_tol()) {
  const Semistability ss = semistability_check(sys.A, tol);
  if (!ss.semistable)
    throw PreconditionError("hinf_norm_semistable: A not semistable");
  if (ss.kernel_dim == 0) return hinf_norm(sys, tol);
  const double residue = (sys.C * ss.J * sys.B).norm();
  const double scale = std::max(1.0, sys.C.norm() * sys.B.norm());
  if (residue > tol.h2_membership * scale)
    throw PreconditionError("hinf_norm_semistable: marginal modes visible in the transfer");
  const Index p = sys.order() - ss.kernel_dim;
  StateSpace stable{ss.A1, (ss.Winv * sys.B).topRows(p), (sys.C * ss.W).leftCols(p)};
  return hinf_norm(stable, tol);
}

/// Balancing transform for a Gramian pair: T P T^T = T^-T Q T^-1 = diag(sigma).
struct BalancedRealization {
  Matrix T, Tinv;
  Vector ghsv;  // descending
};

enum class BalanceSide { CholP, CholQ };

inline BalancedRealization balance_gramians(const Matrix& P, const Matrix& Q,
                                            BalanceSide side = BalanceSide::CholP) {
  const Index n = P.rows();
  if (Q.rows() != n || P.cols() != n || Q.cols() != n)
    throw InvalidInputError("balance_gramians: dimension mismatch");
  const Matrix& Pc = (side == BalanceSide::CholP) ? P : Q;
  const Matrix& Qc = (side == BalanceSide::CholP) ? Q : P;
  Eigen::LLT<Matrix> llt(Pc);
  if (llt.info() != Eigen::Success)
    throw PreconditionError("balance_gramians: Gramian not positive definite");
  const Matrix R = llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Matrix> es(R.transpose() * Qc * R);
  if (es.eigenvalues()(0) <= 0.0)
    throw PreconditionError("balance_gramians: Gramian pair not positive definite");
  Vector sig2 = es.eigenvalues().reverse();
  Matrix U = es.eigenvectors().rowwise().reverse();
  Vector sig = sig2.cwiseSqrt();
  const Vector shalf = sig.cwiseSqrt();

  BalancedRealization out;
  if (side == BalanceSide::CholP) {
    // T = S^1/2 U^T R^-1 ; T^-1 = R U S^-1/2
    out.Tinv = R * U * shalf.cwiseInverse().asDiagonal();
    out.T = shalf.asDiagonal() * U.transpose() *
            R.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  } else {
    // chol(Q)-side: T = S^-1/2 U^T R^T ; T^-1 = R^-T U S^1/2
    out.T = shalf.cwiseInverse().asDiagonal() * U.transpose() * R.transpose();
    out.Tinv = R.transpose()
                   .triangularView<Eigen::Upper>()
                   .solve(Matrix::Identity(n, n)) *
               U * shalf.asDiagonal();
  }
  out.ghsv = sig;
  return out;
}

/// Generalized balanced truncation: balances a Gramian pair satisfying the
/// Lyapunov inequalities, truncates to order r, and reports the GHSV tail
/// bound 2 * sum_{i>r} sigma_i on the H-infinity error.
struct TruncationResult {
  StateSpace reduced;
  BalancedRealization balance;
  double bound = 0.0;
};

inline TruncationResult generalized_balanced_truncation(const StateSpace& sys,
                                                        const Matrix& P, const Matrix& Q,
                                                        Index r,
                                                        BalanceSide side = BalanceSide::CholP) {
  const Index n = sys.order();
  if (r < 1 || r > n)
    throw InvalidInputError("generalized_balanced_truncation: order out of range");
  TruncationResult out;
  out.balance = balance_gramians(P, Q, side);
  const Matrix Ab = out.balance.T * sys.A * out.balance.Tinv;
  const Matrix Bb = out.balance.T * sys.B;
  const Matrix Cb = sys.C * out.balance.Tinv;
  out.reduced = StateSpace(Ab.topLeftCorner(r, r), Bb.topRows(r), Cb.leftCols(r));
  out.bound = (r < n) ? 2.0 * out.balance.ghsv.tail(n - r).sum() : 0.0;
  return out;
}

/// Extremal (stabilizing/anti-stabilizing) solutions of
///   A^T K + K A + C^T C + rho^2 K B B^T K = 0
/// via the ordered complex Schur form of the Hamiltonian. Infeasible when the
/// Hamiltonian has imaginary-axis eigenvalues (small-gain failure).
struct RiccatiInterval {
  bool feasible = false;
  Matrix K_min, K_max;
  double hinf_margin = 0.0;  // rho * ||C (sI-A)^-1 B||_inf, < 1 when feasible
};

namespace detail {

// Sorts the diagonal of a complex Schur form so that entries satisfying
// `first` come first, accumulating the unitary into U.
template <typename Pred>
inline void order_complex_schur(Eigen::MatrixXcd& T, Eigen::MatrixXcd& U, Pred first) {
  const Index n = T.rows();
  using C = std::complex<double>;
  for (Index pass = 0; pass < n; ++pass) {
    bool swapped = false;
    for (Index k = 0; k + 1 < n; ++k) {
      if (first(T(k, k)) || !first(T(k + 1, k + 1))) continue;
      // swap adjacent 1x1 blocks (k, k+1) by a unitary similarity
      const C a = T(k, k), b = T(k, k + 1), c = T(k + 1, k + 1);
      C v1 = b, v2 = c - a;
      const double nv = std::sqrt(std::norm(v1) + std::norm(v2));
      if (nv < 1e-300) continue;  // equal eigenvalues, nothing to do
      v1 /= nv;
      v2 /= nv;
      Eigen::Matrix2cd G;
      G << v1, -std::conj(v2), v2, std::conj(v1);
      T.block(k, 0, 2, n) = G.adjoint() * T.block(k, 0, 2, n);
      T.block(0, k, n, 2) = T.block(0, k, n, 2) * G;
      U.block(0, k, n, 2) = U.block(0, k, n, 2) * G;
      T(k + 1, k) = 0.0;
      swapped = true;
    }
    if (!swapped) break;
  }
}

}  // namespace detail

inline RiccatiInterval solve_riccati_interval(const Matrix& A, const Matrix& B,
                                              const Matrix& C, double rho,
                                              const Tolerances& tol = default_tol()) {
  const Index l = A.rows();
  if (!is_hurwitz(A))
    throw PreconditionError("solve_riccati_interval: A is not Hurwitz");
  RiccatiInterval out;
  Matrix Ham(2 * l, 2 * l);
  Ham << A, rho * rho * B * B.transpose(), -C.transpose() * C, -A.transpose();

  if (detail::hamiltonian_has_imag_axis_eig(Ham, tol.hinf_imag_axis)) {
    out.feasible = false;
    out.hinf_margin = rho * hinf_norm(StateSpace(A, B, C), tol);
    return out;
  }

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(Ham.cast<std::complex<double>>());
  auto extract = [&](bool stable_first) -> Matrix {
    Eigen::MatrixXcd T = schur.matrixT(), U = schur.matrixU();
    detail::order_complex_schur(T, U, [stable_first](std::complex<double> z) {
      return stable_first ? z.real() < 0.0 : z.real() > 0.0;
    });
    Eigen::MatrixXcd X = U.block(0, 0, l, l), Y = U.block(l, 0, l, l);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(X);
    if (!lu.isInvertible())
      throw NumericalError("solve_riccati_interval: singular invariant-subspace basis");
    Matrix K = (Y * lu.inverse()).real();
    return 0.5 * (K + K.transpose());
  };
  out.K_min = extract(true);
  out.K_max = extract(false);
  out.feasible = true;
  out.hinf_margin = rho * hinf_norm(StateSpace(A, B, C), tol);
  return out;
}

/// Smallest gamma with M0 - gamma * blkdiag(weights) < 0 (strict, max
/// eigenvalue below -lmi_feasibility). `weight` is the PSD coefficient of
/// gamma (identity on masked diagonal blocks in the simplest use).
struct LmiGammaResult {
  bool feasible = false;
  double gamma = 0.0;
};

inline LmiGammaResult lmi_gamma_bisect_weighted(const Matrix& M0, const Matrix& weight,
                                       const Tolerances& tol = default_tol(),
                                       double lo = 1e-8, double hi = 1e8) {
  if (M0.rows() != M0.cols() || weight.rows() != M0.rows() || weight.cols() != M0.cols())
    throw InvalidInputError("lmi_gamma_bisect: dimension mismatch");
  auto feasible = [&](double g) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(M0 - g * weight, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() < -tol.lmi_feasibility;
  };
  LmiGammaResult out;
  if (!feasible(hi)) return out;  // gamma-free principal part not negative definite
  out.feasible = true;
  if (feasible(lo)) {
    out.gamma = lo;
    return out;
  }
  double a = lo, b = hi;
  while ((b - a) > 1e-6 * b) {
    const double mid = std::sqrt(a * b);
    if (feasible(mid))
      b = mid;
    else
      a = mid;
  }
  out.gamma = b;
  return out;
}

/// Convenience overload: gamma multiplies the identity on the diagonal blocks
/// selected by `mask`, given the block sizes of M0's partition.
inline LmiGammaResult lmi_gamma_bisect(const Matrix& M0, const std::vector<Index>& block_sizes,
                                       const std::vector<bool>& mask,
                                       const Tolerances& tol = default_tol()) {
  if (block_sizes.size() != mask.size())
    throw InvalidInputError("lmi_gamma_bisect: mask/block mismatch");
  Matrix W = Matrix::Zero(M0.rows(), M0.cols());
  Index at = 0;
  for (size_t b = 0; b < block_sizes.size(); ++b) {
    if (mask[b]) W.block(at, at, block_sizes[b], block_sizes[b]).setIdentity();
    at += block_sizes[b];
  }
  if (at != M0.rows()) throw InvalidInputError("lmi_gamma_bisect: block sizes do not tile M0");
  return lmi_gamma_bisect_weighted(M0, W, tol);
}

}  // namespace netred

#endif  // NETRED_LINSYS_HPP
