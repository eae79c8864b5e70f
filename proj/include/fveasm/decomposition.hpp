#pragma once

#include "fveasm/assembly.hpp"
#include "fveasm/mesh.hpp"
#include "fveasm/types.hpp"

#include <memory>
#include <vector>

namespace fveasm {

enum class DofKind { interior, edge, crosspoint };

struct DofClass {
  DofKind kind = DofKind::interior;
  int owner = 0;  // subdomain, edge or crosspoint id
};

struct Subdomain {
  int ix = 0;
  int iy = 0;
  std::vector<int> triangles;
  std::vector<int> interior;   // free DOFs strictly inside
  std::vector<int> interface;  // free DOFs on the subdomain boundary (part of Gamma)
};

/// Interface between two neighbouring subdomains, without its end corners.
struct InterfaceEdge {
  int first = 0;   // smaller subdomain id
  int second = 0;  // larger subdomain id
  int corner_begin = 0;  // mesh vertex at the start of `dofs`
  int corner_end = 0;    // mesh vertex after the last entry of `dofs`
  std::vector<int> dofs;  // free DOFs ordered from corner_begin to corner_end
};

/// N x N square subdomains aligned with the fine mesh. Subdomains are numbered
/// row-major (id = iy * N + ix), edges sorted by (first, second), crosspoints
/// row-major over the interior subdomain corners.
struct Partition {
  int N = 0;
  int H_over_h = 0;
  std::vector<Subdomain> subdomains;
  std::vector<InterfaceEdge> edges;
  std::vector<int> crosspoints;        // free DOFs
  std::vector<int> crosspoint_vertex;  // mesh vertices of the crosspoints
  std::vector<DofClass> dof_class;     // per free DOF

  /// Crosspoint id of a mesh vertex, or -1.
  int crosspoint_of_vertex(int vertex) const;
};

Partition build_partition(const TriangleMesh& mesh, int N);

/// Local Dirichlet solver for the discrete harmonic extension into each
/// subdomain, built from the interior blocks of the FEM matrix.
class HarmonicExtender {
 public:
  HarmonicExtender(const Partition& partition, const SparseOperator& fem);
  ~HarmonicExtender();
  HarmonicExtender(HarmonicExtender&&) noexcept;
  HarmonicExtender& operator=(HarmonicExtender&&) noexcept;

  /// Interior values of the extension of `interface_values` (one column per
  /// data set, rows ordered as Subdomain::interface).
  DenseMatrix extend_interior(int k, const DenseMatrix& interface_values) const;

  const Partition& partition() const { return *partition_; }

 private:
  struct Local;
  const Partition* partition_;
  std::vector<std::unique_ptr<Local>> locals_;
};

/// Values on the closure of subdomain k, ordered interior first, then the
/// interface DOFs; the interface part is `boundary_values` unchanged.
Vector harmonic_extend(const HarmonicExtender& extender, int k, const Vector& boundary_values);

/// One column per crosspoint: 1 at the crosspoint, linear along the subdomain
/// edges leaving it, 0 on the rest of Gamma, discrete harmonic inside.
SparseMatrix coarse_basis(const HarmonicExtender& extender);

/// One column per DOF of edge e: unit value there, 0 on the rest of Gamma,
/// discrete harmonic in the two adjacent subdomains.
SparseMatrix edge_basis(const HarmonicExtender& extender, int e);

/// Free DOFs of subdomain k in closure order (interior, then interface).
std::vector<int> closure_dofs(const Partition& partition, int k);

/// Local stiffness a_k over subdomain k, in closure order.
SparseMatrix subdomain_stiffness(const TriangleMesh& mesh, const CoefficientField& coeff,
                                 const Partition& partition, int k);

}  // namespace fveasm
