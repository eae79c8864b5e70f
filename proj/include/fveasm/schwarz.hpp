#pragma once

#include "fveasm/assembly.hpp"
#include "fveasm/decomposition.hpp"
#include "fveasm/types.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace fveasm {

enum class Variant { symmetric, nonsymmetric };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

/// Raised when a subspace Gram matrix cannot be factored. For the
/// nonsymmetric variant this means h is above the ellipticity threshold.
class GramFactorizationError : public std::runtime_error {
 public:
  GramFactorizationError(const std::string& subspace, const std::string& what)
      : std::runtime_error(what), subspace_(subspace) {}
  const std::string& subspace() const { return subspace_; }

 private:
  std::string subspace_;
};

enum class SubspaceKind { coarse, edge, interior };

std::string subspace_label(SubspaceKind kind, int id);

/// Factored Gram matrix B^T M B of one subspace.
class GramSolver {
 public:
  GramSolver(const SparseMatrix& gram, bool symmetric, const std::string& label);
  ~GramSolver();
  GramSolver(GramSolver&&) noexcept;
  GramSolver& operator=(GramSolver&&) noexcept;

  Vector solve(const Vector& rhs) const;
  Vector solve_transpose(const Vector& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct Subspace {
  SubspaceKind kind = SubspaceKind::interior;
  int id = 0;
  SparseMatrix basis;  // free DOFs x subspace dimension
  SparseMatrix gram;
  GramSolver solver;

  std::string label() const;
};

/// Edge-based additive Schwarz operator on V_0 + sum V_kl + sum V_k.
///
/// With P = sum_i B_i G_i^{-1} B_i^T, apply() returns P A_h u. The symmetric
/// variant uses G_i = B_i^T A B_i (operator T), the nonsymmetric one
/// G_i = B_i^T A_h B_i (operator S).
class SchwarzPreconditioner {
 public:
  SchwarzPreconditioner(const Partition& partition, const SparseOperator& fem,
                        const SparseOperator& fve, Variant variant);

  Variant variant() const { return variant_; }
  Index dimension() const { return fve_->dimension(); }
  const std::vector<Subspace>& subspaces() const { return subspaces_; }
  const SparseOperator& fem() const { return *fem_; }
  const SparseOperator& fve() const { return *fve_; }

  /// Tu (or Su).
  Vector apply(const Vector& u) const;
  /// Euclidean transpose of apply().
  Vector apply_transpose(const Vector& u) const;
  /// P r, the sum of subspace solves.
  Vector project(const Vector& r) const;
  Vector project_transpose(const Vector& r) const;
  /// Right-hand side g = P b of the preconditioned system.
  Vector preconditioned_rhs(const Vector& b) const;

  LinearOperator as_operator() const;

 private:
  Variant variant_;
  const SparseOperator* fem_;
  const SparseOperator* fve_;
  SparseMatrix fve_transpose_;
  std::vector<Subspace> subspaces_;
};

}  // namespace fveasm
