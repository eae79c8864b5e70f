// fveasm: solve one configuration, reproduce a table, or run the property suite.
//
//   fveasm solve --h 1/64 --H 1/8 --field smooth10 --variant nonsym
//   fveasm table --name table4
//   fveasm properties
//
// solve and table also read `key = value` files through --config.

#include "fveasm/experiments.hpp"
#include "fveasm/krylov.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace fveasm;

struct SolveArgs {
  std::string h = "1/8";
  std::string H = "1/4";
  std::string field = "smooth1";
  double alpha_hat = 1.0;
  std::string variant = "sym";
  double tol = 1e-6;
  std::string eig = "auto";
  std::string out = "md";
  std::string history;
};

int run_solve(const SolveArgs& args) {
  ExperimentConfig c;
  c.n = parse_mesh_size(args.h);
  c.N = parse_mesh_size(args.H);
  c.field = args.field;
  c.alpha_hat = args.alpha_hat;
  c.variant = variant_from_string(args.variant);
  c.tol = args.tol;
  c.eig = eig_mode_from_string(args.eig);
  const TableRow row = run_single(c);

  if (args.out == "csv") {
    std::cout << format_csv({row});
  } else {
    std::cout << format_single_markdown(row);
  }
  if (!args.history.empty() && row.ok()) {
    std::ofstream file(args.history);
    if (!file) throw std::runtime_error("cannot write " + args.history);
    write_residual_csv(file, row.history);
  }
  if (!row.ok()) std::cerr << "error: " << row.error << '\n';
  const bool pass = row.ok() && row.converged && row.within_tolerance &&
                    (!row.envelope.applicable || row.envelope.passed);
  return pass ? 0 : 1;
}

struct TableArgs {
  std::string name;
  bool full = false;
  std::string eig = "auto";
  double eig_tol = 1e-4;
  int threads = 0;
  std::string csv;
};

int run_table_command(const TableArgs& args) {
  TableOptions options;
  options.full = args.full;
  options.eig = eig_mode_from_string(args.eig);
  options.eig_tolerance = args.eig_tol;
  options.threads = args.threads;
  const TableResult result = run_table(table_from_string(args.name), options);
  std::cout << format_markdown(result);
  if (!args.csv.empty()) {
    std::ofstream file(args.csv);
    if (!file) throw std::runtime_error("cannot write " + args.csv);
    file << format_csv(result.rows, args.name);
  }
  return result.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FVE discretization with edge-based additive Schwarz preconditioners"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve one configuration and report iterations and eigenvalue estimates");
  solve->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  solve->set_config("--config", "", "Read options from a key = value file");
  solve->add_option("--h", solve_args.h, "Fine mesh size, 1/n")->capture_default_str();
  solve->add_option("--H", solve_args.H, "Subdomain size, 1/N")->capture_default_str();
  solve->add_option("--field", solve_args.field, "Coefficient")
      ->check(CLI::IsMember({"smooth1", "smooth10", "checkerboard"}))
      ->capture_default_str();
  solve->add_option("--alpha-hat", solve_args.alpha_hat, "Jump on the shaded checkerboard subdomains")
      ->capture_default_str();
  solve->add_option("--variant", solve_args.variant, "Preconditioner variant")
      ->check(CLI::IsMember({"sym", "nonsym"}))
      ->capture_default_str();
  solve->add_option("--tol", solve_args.tol, "Relative residual reduction")->capture_default_str();
  solve->add_option("--eig", solve_args.eig, "beta_1/beta_2 computation")
      ->check(CLI::IsMember({"auto", "dense", "lanczos", "off"}))
      ->capture_default_str();
  solve->add_option("--out", solve_args.out, "Report format")
      ->check(CLI::IsMember({"md", "csv"}))
      ->capture_default_str();
  solve->add_option("--history", solve_args.history, "Write the residual history CSV here");

  TableArgs table_args;
  auto* table = app.add_subcommand("table", "Run one of the reference tables");
  table->set_config("--config", "", "Read options from a key = value file");
  table->add_option("--name", table_args.name, "table1..table4")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "table3", "table4"}));
  table->add_flag("--full", table_args.full, "Include the h = 1/256 row");
  table->add_option("--eig", table_args.eig, "beta_1/beta_2 computation")
      ->check(CLI::IsMember({"auto", "dense", "lanczos", "off"}))
      ->capture_default_str();
  table->add_option("--eig-tol", table_args.eig_tol, "Lanczos tolerance for beta_1/beta_2")->capture_default_str();
  table->add_option("--threads", table_args.threads, "Worker threads (default: FVEASM_THREADS or all cores)");
  table->add_option("--csv", table_args.csv, "Also write the cells as CSV to this file");

  app.add_subcommand("properties", "Run the cross-module property suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (table->parsed()) return run_table_command(table_args);
    const PropertyReport report = run_properties();
    std::cout << format_properties(report);
    return report.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
