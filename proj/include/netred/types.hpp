// Copyright (c) 2026 the netred authors
// SPDX-License-Identifier: Apache-2.0

#ifndef NETRED_TYPES_HPP
#define NETRED_TYPES_HPP

#include <cstdlib>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace netred {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Tolerance bundle shared by all numerical routines. Values follow the
/// defaults documented alongside each routine; NETRED_TOL (a positive scale
/// factor) multiplies the whole bundle.
struct Tolerances {
  double laplacian_validity = 1e-9;  // relative to ||L||_inf
  double connectivity = 1e-9;        // lambda_2 > connectivity * lambda_max
  double lyap_residual = 1e-9;
  double semistable_rank = 1e-8;     // relative to ||A||
  double projector_idem = 1e-8;
  double h2_trace_agree = 1e-7;
  double h2_membership = 1e-8;       // ||C J B|| threshold
  double hinf_rel = 1e-6;
  double hinf_imag_axis = 1e-8;      // Hamiltonian eigenvalue real-part test
  double lmi_feasibility = 1e-10;
  double spectrum_rel = 1e-8;
  double balance_rel = 1e-7;
  double minimality_rank = 1e-9;
  double eig_group_rel = 1e-8;       // Laplacian eigenvalue multiplicity grouping
  double aep = 1e-9;

  Tolerances scaled(double s) const {
    Tolerances t = *this;
    t.laplacian_validity *= s;
    t.connectivity *= s;
    t.lyap_residual *= s;
    t.semistable_rank *= s;
    t.projector_idem *= s;
    t.h2_trace_agree *= s;
    t.h2_membership *= s;
    t.hinf_rel *= s;
    t.hinf_imag_axis *= s;
    t.lmi_feasibility *= s;
    t.spectrum_rel *= s;
    t.balance_rel *= s;
    t.minimality_rank *= s;
    t.eig_group_rel *= s;
    t.aep *= s;
    return t;
  }
};

/// Default tolerances, with the optional NETRED_TOL environment scale applied.
inline const Tolerances& default_tol() {
  static const Tolerances tol = [] {
    Tolerances t;
    if (const char* env = std::getenv("NETRED_TOL")) {
      char* end = nullptr;
      const double s = std::strtod(env, &end);
      if (end != env && s > 0.0) return t.scaled(s);
    }
    return t;
  }();
  return tol;
}

/// Thrown when an operation's mathematical preconditions fail (method
/// inapplicable, e.g. non-tree graph, infeasible Riccati, M != I).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown on numerical failure (solver breakdown, non-convergence).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown on structurally invalid input (bad dimensions, malformed model).
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace netred

#endif  // NETRED_TYPES_HPP
