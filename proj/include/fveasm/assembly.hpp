#pragma once

#include "fveasm/coefficient.hpp"
#include "fveasm/mesh.hpp"
#include "fveasm/types.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace fveasm {

enum class Symmetry { symmetric, general };

/// Matrix of a bilinear form on the free DOFs. Entry (i, j) is form(phi_j, phi_i),
/// so form(u, v) = v^T M u and the discrete system reads M u = b.
struct SparseOperator {
  SparseMatrix matrix;
  Symmetry symmetry = Symmetry::general;

  Index dimension() const { return matrix.rows(); }
  Vector operator*(const Vector& u) const { return matrix * u; }
};

/// a(u, v) = int grad u^T A grad v, P1 elements, edge-midpoint quadrature.
SparseOperator assemble_fem(const TriangleMesh& mesh, const CoefficientField& coeff);

/// a_h(u, v) = a_FV(u, I_h^* v): fluxes of A grad u through the Donald dual
/// segments, one-point (segment midpoint) quadrature.
SparseOperator assemble_fve(const TriangleMesh& mesh, const CoefficientField& coeff);

/// FEM matrix over all vertices restricted to the given triangles (no elimination).
SparseMatrix assemble_fem_full(const TriangleMesh& mesh, const CoefficientField& coeff,
                               const std::vector<int>& triangles);

/// FVE matrix over all vertices, before Dirichlet elimination.
SparseMatrix assemble_fve_full(const TriangleMesh& mesh, const CoefficientField& coeff);

/// Right-hand side f(I_h^* phi_i) on the free DOFs, |tau|/3 * f(c_tau) per triangle.
Vector assemble_load(const TriangleMesh& mesh, const std::function<double(Point)>& f);

/// Same as assemble_load but over all vertices (boundary included).
Vector assemble_load_full(const TriangleMesh& mesh, const std::function<double(Point)>& f);

enum class NormMethod { automatic, dense, lanczos };

/// sup |a_h(u,v) - a(u,v)| / (|u|_a |v|_a), the a-norm of the nonsymmetric
/// perturbation. Dense SVD-free evaluation below `dense_limit` DOFs in
/// automatic mode, Lanczos on A^{-1} D^T A^{-1} D otherwise.
double nonsymmetry_norm(const SparseOperator& fem, const SparseOperator& fve,
                        NormMethod method = NormMethod::automatic, Index dense_limit = 1024);

/// Coordinate text dump: one "row col value" line per stored entry, 0-based.
void write_coordinate(std::ostream& out, const SparseOperator& op);

}  // namespace fveasm
