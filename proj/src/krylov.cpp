#include "fveasm/krylov.hpp"

#include "fveasm/lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace fveasm {

GmresResult gmres_a(const LinearOperator& op, const Vector& g, const SparseMatrix& a,
                    const GmresOptions& options) {
  const Index n = g.size();
  if (op.dimension != n || a.rows() != n) throw std::invalid_argument("gmres_a: dimension mismatch");
  if (!(options.tolerance > 0.0 && options.tolerance < 1.0)) {
    throw std::invalid_argument("gmres_a: tolerance must lie in (0, 1)");
  }

  GmresResult result;
  result.solution = Vector::Zero(n);
  IterationReport& report = result.report;

  const double r0_l2 = g.norm();
  const double beta = std::sqrt(std::max(0.0, g.dot(a * g)));
  report.residual_l2.push_back(r0_l2);
  report.residual_a.push_back(beta);
  const double monitor0 = options.monitor ? options.monitor(result.solution) : 0.0;
  if (options.monitor) report.monitored.push_back(monitor0);
  if (r0_l2 == 0.0) {
    report.converged = true;
    return result;
  }

  const int max_it = options.max_iterations;
  std::vector<Vector> basis{g / beta};
  std::vector<Vector> a_basis{a * basis[0]};
  DenseMatrix hessenberg = DenseMatrix::Zero(max_it + 1, max_it);
  DenseMatrix rotated = DenseMatrix::Zero(max_it + 1, max_it);
  Vector cs = Vector::Zero(max_it);
  Vector sn = Vector::Zero(max_it);
  Vector gamma = Vector::Zero(max_it + 1);
  gamma(0) = beta;
  Vector y;

  for (int j = 0; j < max_it; ++j) {
    Vector w = op.apply(basis[j]);
    // two MGS sweeps; one loses a-orthogonality on high-contrast coefficients
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (int i = 0; i <= j; ++i) {
        const double h = a_basis[i].dot(w);
        hessenberg(i, j) += h;
        w -= h * basis[i];
      }
    }
    Vector aw = a * w;
    const double h_next = std::sqrt(std::max(0.0, w.dot(aw)));
    hessenberg(j + 1, j) = h_next;

    rotated.col(j) = hessenberg.col(j);
    for (int i = 0; i < j; ++i) {
      const double t = cs(i) * rotated(i, j) + sn(i) * rotated(i + 1, j);
      rotated(i + 1, j) = -sn(i) * rotated(i, j) + cs(i) * rotated(i + 1, j);
      rotated(i, j) = t;
    }
    const double rho = std::hypot(rotated(j, j), h_next);
    cs(j) = rotated(j, j) / rho;
    sn(j) = h_next / rho;
    rotated(j, j) = rho;
    rotated(j + 1, j) = 0.0;
    gamma(j + 1) = -sn(j) * gamma(j);
    gamma(j) = cs(j) * gamma(j);

    const int m = j + 1;
    y = rotated.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(gamma.head(m));

    // r_m = V_{m+1} (beta e_1 - Hbar y); the last basis vector is w / h_next
    Vector coeffs = -hessenberg.topLeftCorner(m + 1, m) * y;
    coeffs(0) += beta;
    Vector r = Vector::Zero(n);
    for (int i = 0; i < m; ++i) r += coeffs(i) * basis[i];
    if (h_next > 0.0) r += (coeffs(m) / h_next) * w;

    report.iterations = m;
    report.residual_l2.push_back(r.norm());
    report.residual_a.push_back(std::abs(gamma(m)));
    bool small = report.residual_l2.back() <= options.tolerance * r0_l2;
    if (options.monitor) {
      Vector u = Vector::Zero(n);
      for (int i = 0; i < m; ++i) u += y(i) * basis[i];
      report.monitored.push_back(options.monitor(u));
      small = report.monitored.back() <= options.tolerance * monitor0;
    }

    const bool breakdown = h_next <= 1e-14 * hessenberg.col(j).head(m).norm();
    if (breakdown) {
      report.breakdown = true;
      report.converged = true;
      break;
    }
    if (small) {
      report.converged = true;
      break;
    }
    basis.push_back(w / h_next);
    a_basis.push_back(aw / h_next);
  }

  for (int i = 0; i < report.iterations; ++i) result.solution += y(i) * basis[i];
  report.hessenberg = hessenberg.topLeftCorner(report.iterations, report.iterations);

  const auto k = static_cast<int>(basis.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      report.orthogonality_error =
          std::max(report.orthogonality_error, std::abs(basis[i].dot(a_basis[j]) - expected));
    }

  report.true_residual_l2 = (g - op.apply(result.solution)).norm() / r0_l2;
  return result;
}

double ritz_beta1(const IterationReport& report) {
  if (report.hessenberg.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  const DenseMatrix sym = 0.5 * (report.hessenberg + report.hessenberg.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

std::string to_string(EigenMethod m) {
  switch (m) {
    case EigenMethod::automatic:
      return "auto";
    case EigenMethod::dense:
      return "dense";
    case EigenMethod::lanczos:
      return "lanczos";
  }
  return {};
}

DenseMatrix operator_matrix(const LinearOperator& op) {
  DenseMatrix m(op.dimension, op.dimension);
  Vector e = Vector::Zero(op.dimension);
  for (Index j = 0; j < op.dimension; ++j) {
    e(j) = 1.0;
    m.col(j) = op.apply(e);
    e(j) = 0.0;
  }
  return m;
}

namespace {

bool use_dense(const LinearOperator& op, const SpectralOptions& options) {
  return options.method == EigenMethod::dense ||
         (options.method == EigenMethod::automatic && op.dimension <= options.dense_limit);
}

double dense_beta1(const DenseMatrix& m, const DenseMatrix& a) {
  const DenseMatrix am = a * m;
  const DenseMatrix sym = 0.5 * (am + am.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> eig(sym, a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("estimate_beta1: dense eigensolver failed");
  return eig.eigenvalues()(0);
}

double dense_beta2(const DenseMatrix& m, const DenseMatrix& a) {
  const DenseMatrix gram = m.transpose() * a * m;
  const DenseMatrix sym = 0.5 * (gram + gram.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> eig(sym, a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("estimate_beta2: dense eigensolver failed");
  return std::sqrt(std::max(0.0, eig.eigenvalues()(eig.eigenvalues().size() - 1)));
}

struct AdjointContext {
  explicit AdjointContext(const SparseMatrix& a) : a(a), factor(a) {
    if (factor.info() != Eigen::Success) throw std::invalid_argument("a_matrix is not SPD");
    if (!a.rows()) throw std::invalid_argument("empty a_matrix");
  }
  /// a-adjoint T* u = A^{-1} M^T A u
  Vector adjoint(const LinearOperator& op, const Vector& u) const {
    if (!op.apply_transpose) throw std::invalid_argument("Lanczos estimates need apply_transpose");
    return factor.solve(op.apply_transpose(a * u));
  }
  const SparseMatrix& a;
  Eigen::SimplicialLLT<SparseMatrix> factor;
};

SpectralEstimate lanczos_beta1(const LinearOperator& op, const AdjointContext& ctx,
                               const SpectralOptions& options) {
  auto sym = [&](const Vector& u) -> Vector { return 0.5 * (op.apply(u) + ctx.adjoint(op, u)); };
  const auto r = lanczos_extremes(sym, ctx.a, {options.max_iterations, options.tolerance});
  return {r.smallest, r.smallest_converged, r.iterations, EigenMethod::lanczos};
}

SpectralEstimate lanczos_beta2(const LinearOperator& op, const AdjointContext& ctx,
                               const SpectralOptions& options) {
  auto normal = [&](const Vector& u) -> Vector { return ctx.adjoint(op, op.apply(u)); };
  const auto r = lanczos_extremes(normal, ctx.a, {options.max_iterations, options.tolerance});
  return {std::sqrt(std::max(0.0, r.largest)), r.largest_converged, r.iterations, EigenMethod::lanczos};
}

}  // namespace

std::pair<SpectralEstimate, SpectralEstimate> estimate_betas(const LinearOperator& op,
                                                             const SparseMatrix& a,
                                                             const SpectralOptions& options) {
  if (op.dimension != a.rows()) throw std::invalid_argument("estimate_betas: dimension mismatch");
  if (use_dense(op, options)) {
    const DenseMatrix m = operator_matrix(op);
    const DenseMatrix ad(a);
    return {SpectralEstimate{dense_beta1(m, ad), true, 0, EigenMethod::dense},
            SpectralEstimate{dense_beta2(m, ad), true, 0, EigenMethod::dense}};
  }
  const AdjointContext ctx(a);
  return {lanczos_beta1(op, ctx, options), lanczos_beta2(op, ctx, options)};
}

SpectralEstimate estimate_beta1(const LinearOperator& op, const SparseMatrix& a,
                                const SpectralOptions& options) {
  if (op.dimension != a.rows()) throw std::invalid_argument("estimate_beta1: dimension mismatch");
  if (use_dense(op, options)) {
    return {dense_beta1(operator_matrix(op), DenseMatrix(a)), true, 0, EigenMethod::dense};
  }
  return lanczos_beta1(op, AdjointContext(a), options);
}

SpectralEstimate estimate_beta2(const LinearOperator& op, const SparseMatrix& a,
                                const SpectralOptions& options) {
  if (op.dimension != a.rows()) throw std::invalid_argument("estimate_beta2: dimension mismatch");
  if (use_dense(op, options)) {
    return {dense_beta2(operator_matrix(op), DenseMatrix(a)), true, 0, EigenMethod::dense};
  }
  return lanczos_beta2(op, AdjointContext(a), options);
}

BoundCheck gmres_bound_check(const IterationReport& report, double slack) {
  BoundCheck check;
  if (!(report.beta1_estimate > 0.0) || report.residual_a.empty() || report.residual_a[0] == 0.0) {
    return check;
  }
  check.applicable = true;
  const double ratio = report.beta1_estimate / report.beta2_estimate;
  const double rate = std::max(0.0, 1.0 - ratio * ratio);
  check.worst_margin = std::numeric_limits<double>::infinity();
  // m = 0 holds trivially; start at 1 so the margin says something
  const std::size_t first = report.residual_a.size() > 1 ? 1 : 0;
  for (std::size_t m = first; m < report.residual_a.size(); ++m) {
    const double envelope = std::pow(rate, 0.5 * static_cast<double>(m));
    const double relative = report.residual_a[m] / report.residual_a[0];
    check.worst_margin = std::min(check.worst_margin, envelope - relative);
  }
  check.passed = check.worst_margin >= -slack;
  return check;
}

void write_residual_csv(std::ostream& out, const IterationReport& report) {
  const bool system = !report.monitored.empty();
  out << "iteration,l2_residual,a_residual" << (system ? ",system_l2_residual" : "") << '\n';
  out.precision(17);
  for (std::size_t m = 0; m < report.residual_l2.size(); ++m) {
    out << m << ',' << report.residual_l2[m] << ',' << report.residual_a[m];
    if (system) out << ',' << report.monitored[m];
    out << '\n';
  }
}

}  // namespace fveasm
