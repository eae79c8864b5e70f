#include "fveasm/experiments.hpp"

#include "fveasm/assembly.hpp"
#include "fveasm/coefficient.hpp"
#include "fveasm/decomposition.hpp"
#include "fveasm/mesh.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <set>

namespace fveasm {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

class Suite {
 public:
  void add(const std::string& group, const std::string& name, bool passed, const std::string& detail) {
    report_.verdicts.push_back({group, name, passed, detail});
  }

  // Runs `check`, turning an exception into a failed verdict.
  template <class F>
  void guard(const std::string& group, const std::string& name, F check) {
    try {
      check();
    } catch (const std::exception& e) {
      add(group, name, false, std::string("threw: ") + e.what());
    }
  }

  PropertyReport take() { return std::move(report_); }

 private:
  PropertyReport report_;
};

Vector random_vector(Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = dist(gen);
  return v;
}

double max_abs(const SparseMatrix& m) {
  double worst = 0.0;
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

struct Setup {
  Setup(int n, int N, const CoefficientField& coeff)
      : mesh(build_structured_mesh(n)),
        fem(assemble_fem(mesh, coeff)),
        fve(assemble_fve(mesh, coeff)),
        partition(build_partition(mesh, N)) {}
  TriangleMesh mesh;
  SparseOperator fem;
  SparseOperator fve;
  Partition partition;
};

void mesh_checks(Suite& suite) {
  suite.guard("structure", "control volumes partition the square", [&] {
    double worst = 0.0;
    for (int n : {2, 4, 8, 16, 32}) {
      double sum = 0.0;
      for (double a : control_volume_areas(build_structured_mesh(n))) sum += a;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    suite.add("structure", "control volumes partition the square", worst < 1e-13, "max |sum - 1| = " + sci(worst));
  });
  suite.guard("structure", "zero flux sums", [&] {
    // Inside a triangle the six normals cancel pairwise, and constants carry no flux.
    const auto mesh = build_structured_mesh(16);
    double worst = 0.0;
    Point acc{0.0, 0.0};
    int count = 0;
    for (const auto& s : dual_segments(mesh)) {
      acc = acc + s.normal;
      if (++count == 6) {
        worst = std::max(worst, std::hypot(acc.x, acc.y));
        acc = {0.0, 0.0};
        count = 0;
      }
    }
    const SparseMatrix full = assemble_fve_full(mesh, field_by_name("smooth10", 1.0, 4));
    const Vector rows = full * Vector::Ones(full.cols());
    worst = std::max(worst, rows.cwiseAbs().maxCoeff());
    suite.add("structure", "zero flux sums", worst < 1e-12, "max residual " + sci(worst));
  });
}

void perturbation_checks(Suite& suite) {
  suite.guard("perturbation", "constant coefficient: FVE equals FEM", [&] {
    const Setup s(16, 4, constant_field(3.0));
    const double diff = max_abs(s.fve.matrix - s.fem.matrix);
    const SchwarzPreconditioner t(s.partition, s.fem, s.fve, Variant::symmetric);
    const SchwarzPreconditioner v(s.partition, s.fem, s.fve, Variant::nonsymmetric);
    const Vector u = random_vector(t.dimension(), 7);
    const double gap = (t.apply(u) - v.apply(u)).norm() / t.apply(u).norm();
    suite.add("perturbation", "constant coefficient: FVE equals FEM", diff < 1e-12 && gap < 1e-10,
              "max |A_h - A| = " + sci(diff) + ", |Tu - Su| / |Tu| = " + sci(gap));
  });
  suite.guard("perturbation", "cellwise constant coefficient: zero nonsymmetry", [&] {
    std::vector<double> values;
    for (int k = 0; k < 16; ++k) values.push_back(1.0 + 7.0 * ((k * 5) % 16));
    const Setup s(16, 4, cellwise_constant_field(4, values));
    const double norm = nonsymmetry_norm(s.fem, s.fve);
    suite.add("perturbation", "cellwise constant coefficient: zero nonsymmetry", norm < 1e-12,
              "norm = " + sci(norm));
  });
  suite.guard("perturbation", "nonsymmetry norm decays like h", [&] {
    std::vector<double> norms;
    for (int n : {16, 32, 64}) {
      const Setup s(n, 4, smooth_field(1));
      norms.push_back(nonsymmetry_norm(s.fem, s.fve));
    }
    const double r1 = norms[0] / norms[1];
    const double r2 = norms[1] / norms[2];
    const bool ok = r1 >= 1.6 && r1 <= 2.4 && r2 >= 1.6 && r2 <= 2.4;
    suite.add("perturbation", "nonsymmetry norm decays like h", ok,
              "norms " + sci(norms[0]) + ", " + sci(norms[1]) + ", " + sci(norms[2]) + "; ratios " +
                  sci(r1) + ", " + sci(r2));
  });
}

void partition_checks(Suite& suite) {
  suite.guard("structure", "DOF classes partition the free DOFs", [&] {
    bool ok = true;
    int checked = 0;
    for (auto [n, N] : {std::pair{8, 2}, {16, 4}, {32, 4}, {32, 8}}) {
      const auto mesh = build_structured_mesh(n);
      const auto p = build_partition(mesh, N);
      std::vector<int> seen(mesh.free_count, 0);
      for (const auto& sd : p.subdomains)
        for (int d : sd.interior) ++seen[d];
      for (const auto& e : p.edges)
        for (int d : e.dofs) ++seen[d];
      for (int d : p.crosspoints) ++seen[d];
      for (int c : seen) ok = ok && c == 1;
      checked += mesh.free_count;
      ok = ok && static_cast<int>(p.dof_class.size()) == mesh.free_count;
      ok = ok && static_cast<int>(p.crosspoints.size()) == (N - 1) * (N - 1);
      ok = ok && static_cast<int>(p.edges.size()) == 2 * N * (N - 1);
    }
    suite.add("structure", "DOF classes partition the free DOFs", ok,
              std::to_string(checked) + " DOFs over 4 partitions, each in exactly one class");
  });

  suite.guard("structure", "discrete harmonic extension", [&] {
    const Setup s(16, 4, smooth_field(10));
    const HarmonicExtender ext(s.partition, s.fem);
    double residual = 0.0;
    bool minimal = true;
    for (int k = 0; k < static_cast<int>(s.partition.subdomains.size()); ++k) {
      const auto& sd = s.partition.subdomains[k];
      const Vector boundary = random_vector(static_cast<Index>(sd.interface.size()), 11 + k);
      const Vector closure = harmonic_extend(ext, k, boundary);
      Vector u = Vector::Zero(s.mesh.free_count);
      const auto dofs = closure_dofs(s.partition, k);
      for (std::size_t q = 0; q < dofs.size(); ++q) u(dofs[q]) = closure(static_cast<Index>(q));
      const Vector au = s.fem.matrix * u;
      for (int d : sd.interior) residual = std::max(residual, std::abs(au(d)));
      // any other interior values cost more energy
      Vector w = u;
      const Vector bump = random_vector(static_cast<Index>(sd.interior.size()), 97 + k);
      for (std::size_t q = 0; q < sd.interior.size(); ++q) w(sd.interior[q]) += 1e-2 * bump(static_cast<Index>(q));
      minimal = minimal && w.dot(s.fem.matrix * w) > u.dot(au);
    }
    suite.add("structure", "discrete harmonic extension", residual < 1e-10 && minimal,
              "max interior residual " + sci(residual) + (minimal ? "" : ", not energy minimal"));
  });
}

void schwarz_checks(Suite& suite) {
  suite.guard("structure", "subspaces and Gram solves", [&] {
    bool ok = true;
    std::string detail;
    double worst_solve = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    for (auto [n, N] : {std::pair{8, 2}, {16, 4}, {16, 8}}) {
      const Setup s(n, N, field_by_name("checkerboard", 1e3, N));
      for (Variant v : {Variant::symmetric, Variant::nonsymmetric}) {
        const SchwarzPreconditioner pre(s.partition, s.fem, s.fve, v);
        Index total = 0;
        for (const auto& sub : pre.subspaces()) {
          total += sub.basis.cols();
          const Vector rhs = random_vector(sub.gram.rows(), 3);
          const Vector z = sub.solver.solve(rhs);
          worst_solve = std::max(worst_solve, (sub.gram * z - rhs).norm() / rhs.norm());
          if (v == Variant::symmetric) {
            const DenseMatrix g(sub.gram);
            ok = ok && (g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * g.cwiseAbs().maxCoeff();
            Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(g, Eigen::EigenvaluesOnly);
            min_eig = std::min(min_eig, eig.eigenvalues()(0));
          }
        }
        ok = ok && total == s.mesh.free_count;
      }
    }
    ok = ok && worst_solve < 1e-10 && min_eig > 0.0;
    suite.add("structure", "subspaces and Gram solves", ok,
              "dimension sums match: " + std::string(ok ? "yes" : "see failure") + ", max solve residual " +
                  sci(worst_solve) + ", min symmetric Gram eigenvalue " + sci(min_eig));
  });

  suite.guard("structure", "operator equals explicit sum of projections", [&] {
    const Setup s(8, 2, smooth_field(10));
    double worst = 0.0;
    for (Variant v : {Variant::symmetric, Variant::nonsymmetric}) {
      const SchwarzPreconditioner pre(s.partition, s.fem, s.fve, v);
      DenseMatrix p = DenseMatrix::Zero(pre.dimension(), pre.dimension());
      for (const auto& sub : pre.subspaces()) {
        const DenseMatrix b(sub.basis);
        p += b * DenseMatrix(sub.gram).inverse() * b.transpose();
      }
      const DenseMatrix explicit_t = p * DenseMatrix(s.fve.matrix);
      const DenseMatrix t = operator_matrix(pre.as_operator());
      worst = std::max(worst, (t - explicit_t).cwiseAbs().maxCoeff() / explicit_t.cwiseAbs().maxCoeff());
    }
    suite.add("structure", "operator equals explicit sum of projections", worst < 1e-12,
              "max relative entry difference " + sci(worst));
  });
}

void solver_checks(Suite& suite) {
  double worst_error = 0.0;
  double worst_consistency = 0.0;
  double worst_orth = 0.0;
  int envelope_failures = 0;
  int runs = 0;
  std::vector<std::string> failures;
  for (int n : {8, 16, 32}) {
    for (int N = 2; n / N >= 2; N *= 2) {
      for (const char* field : {"smooth1", "smooth10", "checkerboard"}) {
        for (Variant v : {Variant::symmetric, Variant::nonsymmetric}) {
          ExperimentConfig c;
          c.n = n;
          c.N = N;
          c.field = field;
          c.alpha_hat = 1e3;
          c.variant = v;
          const TableRow r = run_single(c);
          ++runs;
          if (!r.ok() || !r.converged || !r.direct_error) {
            failures.push_back(std::to_string(n) + "/" + std::to_string(N) + " " + field + " " + to_string(v) +
                               (r.ok() ? " did not converge" : ": " + r.error));
            continue;
          }
          worst_error = std::max(worst_error, *r.direct_error);
          worst_consistency = std::max(worst_consistency, *r.rhs_consistency);
          worst_orth = std::max(worst_orth, r.orthogonality_error);
          if (!r.envelope.passed) ++envelope_failures;
        }
      }
    }
  }
  std::string failed = failures.empty() ? "" : "; failed runs: " + std::to_string(failures.size()) + " (" + failures[0] + ")";
  suite.add("oracle", "GMRES matches direct solve", failures.empty() && worst_error <= 1e-5,
            std::to_string(runs) + " runs, max relative a-norm error " + sci(worst_error) + failed);
  suite.add("oracle", "direct solution solves the preconditioned system",
            failures.empty() && worst_consistency <= 1e-9, "max |Tu* - g| / |g| = " + sci(worst_consistency));
  suite.add("structure", "Arnoldi basis is a-orthonormal", failures.empty() && worst_orth < 1e-8,
            "max error " + sci(worst_orth));
  suite.add("envelope", "residuals stay under the beta envelope", failures.empty() && envelope_failures == 0,
            std::to_string(envelope_failures) + " violations");
}

}  // namespace

PropertyReport run_properties() {
  Suite suite;
  mesh_checks(suite);
  perturbation_checks(suite);
  partition_checks(suite);
  schwarz_checks(suite);
  solver_checks(suite);
  return suite.take();
}

}  // namespace fveasm
