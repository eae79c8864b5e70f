#pragma once

#include "fveasm/krylov.hpp"
#include "fveasm/schwarz.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fveasm {

enum class EigMode { automatic, dense, lanczos, off };

std::string to_string(EigMode m);
EigMode eig_mode_from_string(const std::string& name);

struct ExperimentConfig {
  int n = 8;  // h = 1/n
  int N = 4;  // H = 1/N
  std::string field = "smooth1";
  double alpha_hat = 1.0;
  Variant variant = Variant::symmetric;
  double tol = 1e-6;
  EigMode eig = EigMode::automatic;
  /// Lanczos tolerance for beta_1 / beta_2 when the Lanczos path is taken.
  double eig_tolerance = 1e-6;

  /// Throws std::invalid_argument on a misaligned partition, a bad field or tol.
  void validate() const;
};

/// Parses "1/64", "0.015625" or "64" into the number of intervals per side.
int parse_mesh_size(const std::string& text);

struct TableRow {
  ExperimentConfig config;
  /// Empty on success; otherwise the cell failed and the numbers are not set.
  std::string error;

  int iterations = 0;
  bool converged = false;
  /// Ritz estimate of beta_1 from the GMRES Hessenberg.
  double lambda_min = 0.0;
  std::optional<SpectralEstimate> beta1;
  std::optional<SpectralEstimate> beta2;
  BoundCheck envelope;
  double orthogonality_error = 0.0;
  /// Filled for n <= 32: relative a-norm distance to a sparse LU solve of
  /// A_h u = b, and |T u* - g|_2 / |g|_2 for that direct solution.
  std::optional<double> direct_error;
  std::optional<double> rhs_consistency;
  IterationReport history;
  double seconds = 0.0;

  std::optional<int> expected_iterations;
  std::optional<double> expected_lambda;
  bool within_tolerance = true;

  bool ok() const { return error.empty(); }
};

/// Golden comparison: |iterations - expected| <= 2 and relative lambda error <= 5%.
bool within_golden_tolerance(int iterations, double lambda, int expected_iterations,
                             double expected_lambda);

TableRow run_single(const ExperimentConfig& config);

enum class TableName { table1, table2, table3, table4 };

std::string to_string(TableName t);
TableName table_from_string(const std::string& name);

struct Golden {
  TableName table;
  int n;
  int N;
  double alpha_hat;
  Variant variant;
  int iterations;
  double lambda;
};

/// Every reference cell of the four tables, in table order.
const std::vector<Golden>& goldens();

std::optional<Golden> find_golden(TableName table, const ExperimentConfig& config);

/// Cells of a table in report order. Without `full` the h = 1/256 row is left out.
std::vector<ExperimentConfig> table_configs(TableName table, bool full);

struct TableResult {
  TableName name;
  bool full = false;
  std::vector<TableRow> rows;

  bool passed() const;
};

struct TableOptions {
  bool full = false;
  EigMode eig = EigMode::automatic;
  double eig_tolerance = 1e-4;
  /// 0 reads FVEASM_THREADS, falling back to the hardware concurrency.
  int threads = 0;
};

TableResult run_table(TableName table, const TableOptions& options = {});

struct PropertyVerdict {
  /// "perturbation", "oracle", "envelope" or "structure"
  std::string group;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PropertyReport {
  std::vector<PropertyVerdict> verdicts;
  bool passed() const;
};

/// Cross-module property suite on small meshes (n <= 32, plus n = 64 for the
/// perturbation decay).
PropertyReport run_properties();

/// Worker count from FVEASM_THREADS, else std::thread::hardware_concurrency().
int default_thread_count();

// report formatting

std::string format_markdown(const TableResult& result);
/// One row per cell; deterministic (no timings).
std::string format_csv(const std::vector<TableRow>& rows, const std::string& table = "");
std::string format_single_markdown(const TableRow& row);
std::string format_properties(const PropertyReport& report);

}  // namespace fveasm
