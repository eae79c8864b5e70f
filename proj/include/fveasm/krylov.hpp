#pragma once

#include "fveasm/types.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace fveasm {

struct IterationReport {
  int iterations = 0;
  bool converged = false;
  bool breakdown = false;
  /// Index m holds |g - T u_m|, starting with m = 0.
  std::vector<double> residual_l2;
  std::vector<double> residual_a;
  /// Values of GmresOptions::monitor along the run (empty without a monitor).
  std::vector<double> monitored;
  /// |g - T u| / |g| in l2, recomputed from the final iterate.
  double true_residual_l2 = 0.0;
  /// max |<v_i, v_j>_a - delta_ij| over the Arnoldi basis.
  double orthogonality_error = 0.0;
  /// Square Arnoldi matrix H_m = V_m^T A T V_m of the run.
  DenseMatrix hessenberg;
  double beta1_estimate = 0.0;
  double beta2_estimate = 0.0;
};

struct GmresOptions {
  double tolerance = 1e-6;
  int max_iterations = 500;
  /// Norm used by the stopping rule, evaluated on each iterate u_m. When
  /// unset, the rule uses the l2 norm of the preconditioned residual g - T u_m.
  std::function<double(const Vector&)> monitor;
};

struct GmresResult {
  Vector solution;
  IterationReport report;
};

/// Full GMRES for T u = g with zero initial guess, orthogonalizing the Krylov
/// basis in <u, v>_a = v^T A u (modified Gram-Schmidt). Stops when
/// monitor(u_m) <= tolerance * monitor(0), or, without a monitor, when
/// |g - T u_m|_2 <= tolerance * |g|_2.
GmresResult gmres_a(const LinearOperator& op, const Vector& g, const SparseMatrix& a,
                    const GmresOptions& options = {});

/// Smallest eigenvalue of (H_m + H_m^T) / 2 for the run's Hessenberg matrix: the
/// Ritz estimate of beta_1 from the Krylov space GMRES built. NaN for an empty run.
double ritz_beta1(const IterationReport& report);

enum class EigenMethod { automatic, dense, lanczos };

std::string to_string(EigenMethod m);

struct SpectralEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  EigenMethod method = EigenMethod::dense;
};

struct SpectralOptions {
  EigenMethod method = EigenMethod::automatic;
  /// automatic mode switches from dense to Lanczos above this dimension
  Index dense_limit = 1024;
  int max_iterations = 400;
  double tolerance = 1e-6;
};

/// beta_1 = inf a(Tu, u) / a(u, u): smallest eigenvalue of the a-symmetric
/// part (T + T*) / 2 with T* = A^{-1} M^T A.
SpectralEstimate estimate_beta1(const LinearOperator& op, const SparseMatrix& a,
                                const SpectralOptions& options = {});

/// beta_2 = sup |Tu|_a / |u|_a.
SpectralEstimate estimate_beta2(const LinearOperator& op, const SparseMatrix& a,
                                const SpectralOptions& options = {});

/// Both estimates, sharing the dense operator matrix when the dense path is used.
std::pair<SpectralEstimate, SpectralEstimate> estimate_betas(const LinearOperator& op,
                                                             const SparseMatrix& a,
                                                             const SpectralOptions& options = {});

/// Dense matrix of `op`, column by column.
DenseMatrix operator_matrix(const LinearOperator& op);

struct BoundCheck {
  bool applicable = false;
  bool passed = false;
  /// min over m >= 1 of envelope_m - |r_m|_a / |r_0|_a (negative means violation)
  double worst_margin = 0.0;
};

/// Checks |r_m|_a <= (1 - beta1^2 / beta2^2)^{m/2} |r_0|_a along the run,
/// using the beta estimates stored in the report.
BoundCheck gmres_bound_check(const IterationReport& report, double slack = 1e-12);

/// "iteration,l2_residual,a_residual[,system_l2_residual]" rows.
void write_residual_csv(std::ostream& out, const IterationReport& report);

}  // namespace fveasm
