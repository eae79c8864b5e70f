#include "fveasm/krylov.hpp"
#include "fveasm/lanczos.hpp"
#include "fveasm/schwarz.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <random>
#include <sstream>

using namespace fveasm;

namespace {

DenseMatrix random_matrix(Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = dist(gen);
  return m;
}

// 1D Laplacian, SPD
SparseMatrix laplacian(Index n) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

LinearOperator dense_operator(const DenseMatrix& m) {
  return {m.rows(), [m](const Vector& u) -> Vector { return m * u; },
          [m](const Vector& u) -> Vector { return m.transpose() * u; }};
}

// Identity plus a small nonsymmetric perturbation: positive definite in the a-inner product.
DenseMatrix near_identity(Index n, unsigned seed) {
  return DenseMatrix::Identity(n, n) + 0.2 * random_matrix(n, seed) / std::sqrt(static_cast<double>(n));
}

}  // namespace

TEST_CASE("GMRES solves a small nonsymmetric system") {
  const Index n = 30;
  const DenseMatrix m = near_identity(n, 1);
  const Vector g = Vector::LinSpaced(n, 1.0, 2.0);
  const SparseMatrix a = laplacian(n);
  GmresOptions options;
  options.tolerance = 1e-10;
  const auto result = gmres_a(dense_operator(m), g, a, options);
  CHECK(result.report.converged);
  const Vector exact = m.partialPivLu().solve(g);
  CHECK((result.solution - exact).norm() < 1e-8 * exact.norm());
  CHECK(result.report.true_residual_l2 <= 1e-10 * 1.01);
  CHECK(result.report.orthogonality_error < 1e-10);
  CHECK(result.report.residual_l2.size() == static_cast<std::size_t>(result.report.iterations + 1));
}

TEST_CASE("a-norm residuals never increase and reach zero by dimension n") {
  const Index n = 12;
  const DenseMatrix m = random_matrix(n, 7) + 4.0 * DenseMatrix::Identity(n, n);
  const SparseMatrix a = laplacian(n);
  GmresOptions options;
  options.tolerance = 1e-13;
  const auto result = gmres_a(dense_operator(m), Vector::Ones(n), a, options);
  CHECK(result.report.converged);
  CHECK(result.report.iterations <= n);
  const auto& ra = result.report.residual_a;
  for (std::size_t k = 1; k < ra.size(); ++k) CHECK(ra[k] <= ra[k - 1] * (1.0 + 1e-12));
}

TEST_CASE("Hessenberg matrix is the a-projection of the operator") {
  const Index n = 8;
  const DenseMatrix m = near_identity(n, 3);
  const SparseMatrix a = laplacian(n);
  GmresOptions options;
  options.tolerance = 1e-15;
  options.max_iterations = static_cast<int>(n);
  const auto result = gmres_a(dense_operator(m), Vector::Ones(n), a, options);
  REQUIRE(result.report.iterations == n);
  // with the full space the Ritz estimate is beta_1 itself
  SpectralOptions dense;
  dense.method = EigenMethod::dense;
  const double beta1 = estimate_beta1(dense_operator(m), a, dense).value;
  CHECK(ritz_beta1(result.report) == doctest::Approx(beta1).epsilon(1e-8));
}

TEST_CASE("Ritz estimate from a partial run bounds beta_1 from above") {
  const Index n = 40;
  const DenseMatrix m = near_identity(n, 11);
  const SparseMatrix a = laplacian(n);
  GmresOptions options;
  options.max_iterations = 5;
  const auto result = gmres_a(dense_operator(m), Vector::Ones(n), a, options);
  CHECK_FALSE(result.report.converged);
  CHECK(result.report.iterations == 5);
  SpectralOptions dense;
  dense.method = EigenMethod::dense;
  CHECK(ritz_beta1(result.report) >= estimate_beta1(dense_operator(m), a, dense).value - 1e-12);
}

TEST_CASE("monitor drives the stopping rule") {
  const Index n = 20;
  const DenseMatrix m = near_identity(n, 5);
  const SparseMatrix a = laplacian(n);
  const Vector g = Vector::Ones(n);
  int calls = 0;
  GmresOptions options;
  options.tolerance = 1e-3;
  options.monitor = [&](const Vector& u) {
    ++calls;
    return (g - m * u).lpNorm<Eigen::Infinity>();
  };
  const auto result = gmres_a(dense_operator(m), g, a, options);
  CHECK(result.report.converged);
  CHECK(result.report.monitored.size() == static_cast<std::size_t>(calls));
  CHECK(result.report.monitored.back() <= 1e-3 * result.report.monitored.front());
  CHECK(result.report.monitored[result.report.monitored.size() - 2] > 1e-3 * result.report.monitored.front());
}

TEST_CASE("GMRES edge cases") {
  const SparseMatrix a = laplacian(4);
  const auto op = dense_operator(DenseMatrix::Identity(4, 4));
  const auto zero = gmres_a(op, Vector::Zero(4), a);
  CHECK(zero.report.converged);
  CHECK(zero.report.iterations == 0);
  CHECK(zero.solution.norm() == 0.0);

  // identity: one step, happy breakdown
  const auto one = gmres_a(op, Vector::Ones(4), a);
  CHECK(one.report.iterations == 1);
  CHECK((one.solution - Vector::Ones(4)).norm() < 1e-14);

  GmresOptions bad;
  bad.tolerance = 1.5;
  CHECK_THROWS_AS(gmres_a(op, Vector::Ones(4), a, bad), std::invalid_argument);
  CHECK_THROWS_AS(gmres_a(op, Vector::Ones(5), a), std::invalid_argument);
}

TEST_CASE("beta estimates: identity and scaled identity") {
  const Index n = 10;
  const SparseMatrix a = laplacian(n);
  for (EigenMethod method : {EigenMethod::dense, EigenMethod::lanczos}) {
    SpectralOptions options;
    options.method = method;
    const auto [b1, b2] = estimate_betas(dense_operator(2.5 * DenseMatrix::Identity(n, n)), a, options);
    CHECK(b1.value == doctest::Approx(2.5));
    CHECK(b2.value == doctest::Approx(2.5));
    CHECK(b1.method == method);
  }
}

TEST_CASE("beta estimates: dense and Lanczos agree on a Schwarz operator") {
  const auto mesh = build_structured_mesh(16);
  const auto coeff = checkerboard_field(10, 100.0, 4);
  const auto fem = assemble_fem(mesh, coeff);
  const auto fve = assemble_fve(mesh, coeff);
  const auto partition = build_partition(mesh, 4);
  const SchwarzPreconditioner pre(partition, fem, fve, Variant::nonsymmetric);
  SpectralOptions dense;
  dense.method = EigenMethod::dense;
  SpectralOptions lanczos;
  lanczos.method = EigenMethod::lanczos;
  lanczos.tolerance = 1e-8;
  const auto [d1, d2] = estimate_betas(pre.as_operator(), fem.matrix, dense);
  const auto l1 = estimate_beta1(pre.as_operator(), fem.matrix, lanczos);
  const auto l2 = estimate_beta2(pre.as_operator(), fem.matrix, lanczos);
  CHECK(l1.converged);
  CHECK(l2.converged);
  CHECK(l1.value == doctest::Approx(d1.value).epsilon(1e-5));
  CHECK(l2.value == doctest::Approx(d2.value).epsilon(1e-5));
  CHECK(d1.value > 0.0);
  CHECK(d1.value < d2.value);
}

TEST_CASE("Lanczos extremes of a diagonal matrix") {
  const Index n = 50;
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
  SparseMatrix identity(n, n);
  identity.setFromTriplets(t.begin(), t.end());
  const Vector diag = Vector::LinSpaced(n, 0.5, 10.0);
  const auto r = lanczos_extremes([&](const Vector& u) -> Vector { return diag.cwiseProduct(u); }, identity);
  CHECK(r.smallest == doctest::Approx(0.5));
  CHECK(r.largest == doctest::Approx(10.0));
  CHECK(r.smallest_converged);
  CHECK(r.largest_converged);
}

TEST_CASE("residual envelope check") {
  IterationReport report;
  report.residual_a = {1.0, 0.5, 0.1};
  report.beta1_estimate = 0.5;
  report.beta2_estimate = 1.0;  // rate sqrt(0.75) per step
  auto check = gmres_bound_check(report);
  CHECK(check.applicable);
  CHECK(check.passed);

  report.residual_a = {1.0, 0.95, 0.1};
  check = gmres_bound_check(report);
  CHECK_FALSE(check.passed);
  CHECK(check.worst_margin == doctest::Approx(std::sqrt(0.75) - 0.95));

  report.beta1_estimate = 0.0;
  CHECK_FALSE(gmres_bound_check(report).applicable);
}

TEST_CASE("residual CSV") {
  IterationReport report;
  report.residual_l2 = {1.0, 0.25};
  report.residual_a = {2.0, 0.5};
  std::ostringstream plain;
  write_residual_csv(plain, report);
  CHECK(plain.str() == "iteration,l2_residual,a_residual\n0,1,2\n1,0.25,0.5\n");

  report.monitored = {3.0, 1.5};
  std::ostringstream with_system;
  write_residual_csv(with_system, report);
  CHECK(with_system.str().rfind("iteration,l2_residual,a_residual,system_l2_residual\n0,1,2,3\n", 0) == 0);
}
