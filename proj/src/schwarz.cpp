#include "fveasm/schwarz.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace fveasm {

std::string to_string(Variant v) { return v == Variant::symmetric ? "sym" : "nonsym"; }

Variant variant_from_string(const std::string& name) {
  if (name == "sym" || name == "symmetric") return Variant::symmetric;
  if (name == "nonsym" || name == "nonsymmetric") return Variant::nonsymmetric;
  throw std::invalid_argument("unknown variant '" + name + "'");
}

struct GramSolver::Impl {
  std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>> llt;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu;
};

GramSolver::GramSolver(const SparseMatrix& gram, bool symmetric, const std::string& label)
    : impl_(std::make_unique<Impl>()) {
  if (symmetric) {
    impl_->llt = std::make_unique<Eigen::SimplicialLLT<SparseMatrix>>(gram);
    if (impl_->llt->info() != Eigen::Success) {
      throw GramFactorizationError(label, "Cholesky factorization of the " + label +
                                              " Gram matrix failed (not SPD)");
    }
  } else {
    impl_->lu = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
    SparseMatrix g = gram;
    g.makeCompressed();
    impl_->lu->analyzePattern(g);
    impl_->lu->factorize(g);
    if (impl_->lu->info() != Eigen::Success) {
      throw GramFactorizationError(label, "LU factorization of the " + label +
                                              " Gram matrix failed; h may be above the "
                                              "ellipticity threshold of a_h");
    }
  }
}

GramSolver::~GramSolver() = default;
GramSolver::GramSolver(GramSolver&&) noexcept = default;
GramSolver& GramSolver::operator=(GramSolver&&) noexcept = default;

Vector GramSolver::solve(const Vector& rhs) const {
  if (impl_->llt) return impl_->llt->solve(rhs);
  return impl_->lu->solve(rhs);
}

Vector GramSolver::solve_transpose(const Vector& rhs) const {
  if (impl_->llt) return impl_->llt->solve(rhs);
  return impl_->lu->transpose().solve(rhs);
}

std::string subspace_label(SubspaceKind kind, int id) {
  switch (kind) {
    case SubspaceKind::coarse:
      return "coarse";
    case SubspaceKind::edge:
      return "edge " + std::to_string(id);
    case SubspaceKind::interior:
      return "subdomain " + std::to_string(id);
  }
  return {};
}

std::string Subspace::label() const { return subspace_label(kind, id); }

namespace {

SparseMatrix selection(Index rows, const std::vector<int>& dofs) {
  std::vector<Triplet> t;
  t.reserve(dofs.size());
  for (std::size_t q = 0; q < dofs.size(); ++q) t.emplace_back(dofs[q], static_cast<Index>(q), 1.0);
  SparseMatrix s(rows, static_cast<Index>(dofs.size()));
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

Subspace make_subspace(SubspaceKind kind, int id, SparseMatrix basis, const SparseMatrix& form,
                       bool symmetric) {
  SparseMatrix gram = SparseMatrix(basis.transpose()) * (form * basis);
  gram.prune(0.0);
  GramSolver solver(gram, symmetric, subspace_label(kind, id));
  return Subspace{kind, id, std::move(basis), std::move(gram), std::move(solver)};
}

// B^T r and out += B z without forming full-length temporaries; there are
// thousands of small subspaces at fine h.
Vector gather(const Subspace& s, const Vector& r) {
  Vector local(s.basis.cols());
  for (Index j = 0; j < s.basis.outerSize(); ++j) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(s.basis, j); it; ++it) sum += it.value() * r(it.row());
    local(j) = sum;
  }
  return local;
}

void scatter(const Subspace& s, const Vector& z, Vector& out) {
  for (Index j = 0; j < s.basis.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(s.basis, j); it; ++it) out(it.row()) += it.value() * z(j);
}

}  // namespace

SchwarzPreconditioner::SchwarzPreconditioner(const Partition& partition, const SparseOperator& fem,
                                             const SparseOperator& fve, Variant variant)
    : variant_(variant), fem_(&fem), fve_(&fve), fve_transpose_(fve.matrix.transpose()) {
  const Index dim = fem.dimension();
  if (fve.dimension() != dim || static_cast<Index>(partition.dof_class.size()) != dim) {
    throw std::invalid_argument("SchwarzPreconditioner: operator and partition sizes differ");
  }
  const bool symmetric = variant == Variant::symmetric;
  const SparseMatrix& form = symmetric ? fem.matrix : fve.matrix;

  const HarmonicExtender extender(partition, fem);
  if (!partition.crosspoints.empty()) {
    subspaces_.push_back(make_subspace(SubspaceKind::coarse, 0, coarse_basis(extender), form, symmetric));
  }
  for (int e = 0; e < static_cast<int>(partition.edges.size()); ++e) {
    subspaces_.push_back(make_subspace(SubspaceKind::edge, e, edge_basis(extender, e), form, symmetric));
  }
  for (int k = 0; k < static_cast<int>(partition.subdomains.size()); ++k) {
    subspaces_.push_back(make_subspace(SubspaceKind::interior, k,
                                       selection(dim, partition.subdomains[k].interior), form, symmetric));
  }

  Index total = 0;
  for (const auto& s : subspaces_) total += s.basis.cols();
  if (total != dim) {
    throw std::logic_error("SchwarzPreconditioner: subspace dimensions sum to " + std::to_string(total) +
                           ", expected " + std::to_string(dim));
  }
}

Vector SchwarzPreconditioner::project(const Vector& r) const {
  if (r.size() != dimension()) throw std::invalid_argument("SchwarzPreconditioner: dimension mismatch");
  Vector out = Vector::Zero(dimension());
  for (const auto& s : subspaces_) scatter(s, s.solver.solve(gather(s, r)), out);
  return out;
}

Vector SchwarzPreconditioner::project_transpose(const Vector& r) const {
  if (variant_ == Variant::symmetric) return project(r);
  if (r.size() != dimension()) throw std::invalid_argument("SchwarzPreconditioner: dimension mismatch");
  Vector out = Vector::Zero(dimension());
  for (const auto& s : subspaces_) scatter(s, s.solver.solve_transpose(gather(s, r)), out);
  return out;
}

Vector SchwarzPreconditioner::apply(const Vector& u) const {
  if (u.size() != dimension()) throw std::invalid_argument("SchwarzPreconditioner: dimension mismatch");
  return project(fve_->matrix * u);
}

Vector SchwarzPreconditioner::apply_transpose(const Vector& u) const {
  return fve_transpose_ * project_transpose(u);
}

Vector SchwarzPreconditioner::preconditioned_rhs(const Vector& b) const { return project(b); }

LinearOperator SchwarzPreconditioner::as_operator() const {
  return {dimension(), [this](const Vector& u) { return apply(u); },
          [this](const Vector& u) { return apply_transpose(u); }};
}

}  // namespace fveasm
