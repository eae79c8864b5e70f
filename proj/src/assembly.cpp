#include "fveasm/assembly.hpp"

#include "fveasm/lanczos.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace fveasm {

namespace {

Point apply(const Tensor2& a, Point g) {
  return {a(0, 0) * g.x + a(0, 1) * g.y, a(1, 0) * g.x + a(1, 1) * g.y};
}

SparseMatrix eliminate_dirichlet(const TriangleMesh& mesh, const std::vector<Triplet>& full) {
  std::vector<Triplet> reduced;
  reduced.reserve(full.size());
  for (const auto& t : full) {
    const int r = mesh.free_index[t.row()];
    const int c = mesh.free_index[t.col()];
    if (r >= 0 && c >= 0) reduced.emplace_back(r, c, t.value());
  }
  SparseMatrix m(mesh.free_count, mesh.free_count);
  m.setFromTriplets(reduced.begin(), reduced.end());
  m.makeCompressed();
  return m;
}

void add_fem_triangle(const TriangleMesh& mesh, const CoefficientField& coeff, int t,
                      std::vector<Triplet>& triplets) {
  const auto& tri = mesh.triangles[t];
  const Point c = mesh.centroid(t);
  Tensor2 mean = Tensor2::Zero();
  for (int k = 0; k < 3; ++k) {
    const Point mid = 0.5 * (mesh.vertices[tri[k]] + mesh.vertices[tri[(k + 1) % 3]]);
    mean += coeff.evaluate(mid, c);
  }
  mean /= 3.0;
  const double area = mesh.area(t);
  const auto grads = mesh.gradients(t);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      triplets.emplace_back(tri[i], tri[j], area * dot(grads[i], apply(mean, grads[j])));
    }
  }
}

std::vector<Triplet> fem_triplets(const TriangleMesh& mesh, const CoefficientField& coeff) {
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.triangles.size());
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    add_fem_triangle(mesh, coeff, t, triplets);
  }
  return triplets;
}

std::vector<Triplet> fve_triplets(const TriangleMesh& mesh, const CoefficientField& coeff) {
  std::vector<Triplet> triplets;
  triplets.reserve(18 * mesh.triangles.size());
  for (const auto& s : dual_segments(mesh)) {
    const auto& tri = mesh.triangles[s.triangle];
    const auto grads = mesh.gradients(s.triangle);
    const Tensor2 a = coeff.evaluate(s.midpoint, mesh.centroid(s.triangle));
    for (int j = 0; j < 3; ++j) {
      // minus the outward flux of A grad phi_j through the segment
      triplets.emplace_back(s.owner_vertex, tri[j], -dot(apply(a, grads[j]), s.normal));
    }
  }
  return triplets;
}

}  // namespace

SparseOperator assemble_fem(const TriangleMesh& mesh, const CoefficientField& coeff) {
  require_elliptic(coeff);
  return {eliminate_dirichlet(mesh, fem_triplets(mesh, coeff)), Symmetry::symmetric};
}

SparseOperator assemble_fve(const TriangleMesh& mesh, const CoefficientField& coeff) {
  require_elliptic(coeff);
  return {eliminate_dirichlet(mesh, fve_triplets(mesh, coeff)), Symmetry::general};
}

SparseMatrix assemble_fem_full(const TriangleMesh& mesh, const CoefficientField& coeff,
                               const std::vector<int>& triangles) {
  std::vector<Triplet> triplets;
  triplets.reserve(9 * triangles.size());
  for (int t : triangles) add_fem_triangle(mesh, coeff, t, triplets);
  const auto count = static_cast<Index>(mesh.vertices.size());
  SparseMatrix m(count, count);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseMatrix assemble_fve_full(const TriangleMesh& mesh, const CoefficientField& coeff) {
  const auto triplets = fve_triplets(mesh, coeff);
  const auto count = static_cast<Index>(mesh.vertices.size());
  SparseMatrix m(count, count);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Vector assemble_load_full(const TriangleMesh& mesh, const std::function<double(Point)>& f) {
  Vector load = Vector::Zero(static_cast<Index>(mesh.vertices.size()));
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const double share = mesh.area(t) / 3.0 * f(mesh.centroid(t));
    for (int v : mesh.triangles[t]) load(v) += share;
  }
  return load;
}

Vector assemble_load(const TriangleMesh& mesh, const std::function<double(Point)>& f) {
  const Vector full = assemble_load_full(mesh, f);
  Vector load(mesh.free_count);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (mesh.free_index[v] >= 0) load(mesh.free_index[v]) = full(static_cast<Index>(v));
  }
  return load;
}

double nonsymmetry_norm(const SparseOperator& fem, const SparseOperator& fve, NormMethod method,
                        Index dense_limit) {
  if (fem.dimension() != fve.dimension()) {
    throw std::invalid_argument("nonsymmetry_norm: dimension mismatch");
  }
  const Index dim = fem.dimension();
  const SparseMatrix diff = fve.matrix - fem.matrix;
  if (diff.norm() == 0.0) return 0.0;

  if (method == NormMethod::dense || (method == NormMethod::automatic && dim <= dense_limit)) {
    Eigen::LLT<DenseMatrix> llt{DenseMatrix(fem.matrix)};
    if (llt.info() != Eigen::Success) throw std::runtime_error("nonsymmetry_norm: FEM matrix not SPD");
    // X = L^{-1} D L^{-T}; |X|_2^2 = lambda_max(X^T X)
    DenseMatrix x = llt.matrixL().solve(DenseMatrix(diff));
    x = llt.matrixL().solve(x.transpose()).transpose();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(x.transpose() * x, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues()(dim - 1)));
  }

  Eigen::SimplicialLDLT<SparseMatrix> solver(fem.matrix);
  if (solver.info() != Eigen::Success) throw std::runtime_error("nonsymmetry_norm: FEM matrix not SPD");
  const SparseMatrix diff_t = diff.transpose();
  auto op = [&](const Vector& u) -> Vector {
    const Vector w = solver.solve(Vector(diff * u));
    return solver.solve(Vector(diff_t * w));
  };
  LanczosOptions options;
  options.tolerance = 1e-8;
  const auto result = lanczos_extremes(op, fem.matrix, options);
  return std::sqrt(std::max(0.0, result.largest));
}

void write_coordinate(std::ostream& out, const SparseOperator& op) {
  out << std::setprecision(17);
  for (Index k = 0; k < op.matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(op.matrix, k); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace fveasm
