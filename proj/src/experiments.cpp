#include "fveasm/experiments.hpp"

#include "fveasm/assembly.hpp"
#include "fveasm/coefficient.hpp"
#include "fveasm/decomposition.hpp"
#include "fveasm/mesh.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace fveasm {

std::string to_string(EigMode m) {
  switch (m) {
    case EigMode::automatic:
      return "auto";
    case EigMode::dense:
      return "dense";
    case EigMode::lanczos:
      return "lanczos";
    case EigMode::off:
      return "off";
  }
  return {};
}

EigMode eig_mode_from_string(const std::string& name) {
  if (name == "auto") return EigMode::automatic;
  if (name == "dense") return EigMode::dense;
  if (name == "lanczos") return EigMode::lanczos;
  if (name == "off") return EigMode::off;
  throw std::invalid_argument("unknown eigenvalue mode '" + name + "' (expected dense|lanczos|off|auto)");
}

void ExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("h must be at most 1/2");
  if (N < 1) throw std::invalid_argument("H must be at most 1");
  if (n % N != 0) {
    throw std::invalid_argument("1/h = " + std::to_string(n) + " is not a multiple of 1/H = " + std::to_string(N));
  }
  if (n / N < 2) throw std::invalid_argument("H/h must be at least 2");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("tol must lie in (0, 1)");
  if (!(alpha_hat > 0.0)) throw std::invalid_argument("alpha-hat must be positive");
  if (field != "smooth1" && field != "smooth10" && field != "checkerboard") {
    throw std::invalid_argument("unknown field '" + field + "'");
  }
  if (field == "checkerboard" && N % 2 != 0) {
    throw std::invalid_argument("checkerboard needs an even number of subdomains per side");
  }
}

int parse_mesh_size(const std::string& text) {
  std::size_t used = 0;
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      if (std::stod(text.substr(0, slash)) != 1.0) throw std::invalid_argument("numerator");
      const std::string denom = text.substr(slash + 1);
      const int n = std::stoi(denom, &used);
      if (used != denom.size() || n < 1) throw std::invalid_argument("denominator");
      return n;
    }
    const double value = std::stod(text, &used);
    if (used != text.size() || !(value > 0.0)) throw std::invalid_argument("value");
    const double inverse = value > 1.0 ? value : 1.0 / value;
    const long n = std::lround(inverse);
    if (n < 1 || std::abs(inverse - static_cast<double>(n)) > 1e-9 * inverse) {
      throw std::invalid_argument("not 1/integer");
    }
    return static_cast<int>(n);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot read mesh size '" + text + "' (use 1/n)");
  }
}

bool within_golden_tolerance(int iterations, double lambda, int expected_iterations, double expected_lambda) {
  return std::abs(iterations - expected_iterations) <= 2 &&
         std::abs(lambda - expected_lambda) <= 0.05 * std::abs(expected_lambda);
}

namespace {

EigenMethod spectral_method(EigMode m) {
  switch (m) {
    case EigMode::dense:
      return EigenMethod::dense;
    case EigMode::lanczos:
      return EigenMethod::lanczos;
    default:
      return EigenMethod::automatic;
  }
}

void run_pipeline(const ExperimentConfig& config, TableRow& row) {
  config.validate();
  const auto mesh = build_structured_mesh(config.n);
  const auto coeff = field_by_name(config.field, config.alpha_hat, config.N);
  const auto fem = assemble_fem(mesh, coeff);
  const auto fve = assemble_fve(mesh, coeff);
  const Vector b = assemble_load(mesh, [](Point) { return 1.0; });
  const auto partition = build_partition(mesh, config.N);
  const SchwarzPreconditioner pre(partition, fem, fve, config.variant);
  const LinearOperator op = pre.as_operator();
  const Vector g = pre.preconditioned_rhs(b);

  GmresOptions options;
  options.tolerance = config.tol;
  options.max_iterations = std::max(500, static_cast<int>(std::min<Index>(op.dimension, 2000)));
  options.monitor = [&](const Vector& u) { return (b - fve.matrix * u).norm(); };
  auto result = gmres_a(op, g, fem.matrix, options);

  row.iterations = result.report.iterations;
  row.converged = result.report.converged;
  row.orthogonality_error = result.report.orthogonality_error;
  row.lambda_min = ritz_beta1(result.report);

  if (config.eig != EigMode::off) {
    SpectralOptions spectral;
    spectral.method = spectral_method(config.eig);
    spectral.tolerance = config.eig_tolerance;
    const auto [beta1, beta2] = estimate_betas(op, fem.matrix, spectral);
    row.beta1 = beta1;
    row.beta2 = beta2;
    result.report.beta1_estimate = beta1.value;
    result.report.beta2_estimate = beta2.value;
    row.envelope = gmres_bound_check(result.report);
  }

  if (config.n <= 32) {
    Eigen::SparseLU<SparseMatrix> lu;
    SparseMatrix m = fve.matrix;
    m.makeCompressed();
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw std::runtime_error("sparse LU of A_h failed");
    const Vector exact = lu.solve(b);
    const Vector diff = result.solution - exact;
    row.direct_error = std::sqrt(diff.dot(fem.matrix * diff) / exact.dot(fem.matrix * exact));
    row.rhs_consistency = (op.apply(exact) - g).norm() / g.norm();
  }
  row.history = std::move(result.report);
}

std::optional<Golden> any_golden(const ExperimentConfig& config) {
  for (TableName t : {TableName::table1, TableName::table2, TableName::table3, TableName::table4}) {
    if (auto g = find_golden(t, config)) return g;
  }
  return std::nullopt;
}

void apply_golden(TableRow& row, const std::optional<Golden>& golden) {
  row.expected_iterations.reset();
  row.expected_lambda.reset();
  if (golden) {
    row.expected_iterations = golden->iterations;
    row.expected_lambda = golden->lambda;
  }
  row.within_tolerance =
      row.ok() && (!golden || within_golden_tolerance(row.iterations, row.lambda_min, golden->iterations,
                                                       golden->lambda));
}

}  // namespace

TableRow run_single(const ExperimentConfig& config) {
  TableRow row;
  row.config = config;
  const auto start = std::chrono::steady_clock::now();
  try {
    run_pipeline(config, row);
  } catch (const std::exception& e) {
    row.error = e.what();
    if (row.error.empty()) row.error = "unknown error";
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  apply_golden(row, row.ok() ? any_golden(config) : std::nullopt);
  return row;
}

int default_thread_count() {
  if (const char* env = std::getenv("FVEASM_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

bool TableResult::passed() const {
  for (const auto& r : rows) {
    if (!r.ok() || !r.converged || !r.within_tolerance) return false;
    if (r.envelope.applicable && !r.envelope.passed) return false;
  }
  return true;
}

TableResult run_table(TableName table, const TableOptions& options) {
  TableResult result{table, options.full, {}};
  std::vector<ExperimentConfig> configs = table_configs(table, options.full);
  for (auto& c : configs) {
    c.eig = options.eig;
    c.eig_tolerance = options.eig_tolerance;
  }
  result.rows.resize(configs.size());

  // Largest cells first so the slow ones do not end up last on one worker.
  std::vector<std::size_t> order(configs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return configs[a].n > configs[b].n; });

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < order.size(); k = next++) {
      const std::size_t i = order[k];
      result.rows[i] = run_single(configs[i]);
      apply_golden(result.rows[i], result.rows[i].ok() ? find_golden(table, configs[i]) : std::nullopt);
    }
  };
  const int threads = std::max(1, std::min<int>(options.threads > 0 ? options.threads : default_thread_count(),
                                                 static_cast<int>(configs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

bool PropertyReport::passed() const {
  for (const auto& v : verdicts)
    if (!v.passed) return false;
  return true;
}

}  // namespace fveasm
