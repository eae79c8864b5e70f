#include "fveasm/experiments.hpp"

#include <cmath>
#include <stdexcept>

namespace fveasm {

namespace {

struct Cell {
  int iterations;
  double lambda;
};

// Rows h = 1/8 .. 1/256, columns H = 1/4 .. 1/128 (lower triangle, H/h >= 2).
using Grid = std::vector<std::vector<Cell>>;

const Grid kTable1 = {
    {{7, 5.80e-1}},
    {{9, 3.72e-1}, {10, 5.60e-1}},
    {{11, 2.48e-1}, {13, 3.57e-1}, {10, 5.56e-1}},
    {{13, 1.76e-1}, {16, 2.41e-1}, {14, 3.53e-1}, {10, 5.56e-1}},
    {{15, 1.30e-1}, {19, 1.72e-1}, {17, 2.38e-1}, {13, 3.53e-1}, {10, 5.55e-1}},
    {{16, 1.01e-1}, {21, 1.28e-1}, {20, 1.70e-1}, {16, 2.38e-1}, {13, 3.52e-1}, {10, 5.54e-1}},
};

const Grid kTable2 = {
    {{10, 5.31e-1}},
    {{12, 3.07e-1}, {13, 4.31e-1}},
    {{14, 1.77e-1}, {18, 2.42e-1}, {14, 4.36e-1}},
    {{15, 1.21e-1}, {23, 1.61e-1}, {18, 2.82e-1}, {12, 5.20e-1}},
    {{17, 8.93e-2}, {27, 1.17e-1}, {22, 1.94e-1}, {16, 3.37e-1}, {11, 5.53e-1}},
    {{20, 6.94e-2}, {31, 8.90e-2}, {26, 1.41e-1}, {20, 2.28e-1}, {14, 3.57e-1}, {11, 5.57e-1}},
};

const Grid kTable3 = {
    {{10, 5.20e-1}},
    {{12, 3.11e-1}, {13, 4.25e-1}},
    {{14, 1.79e-1}, {18, 2.43e-1}, {14, 4.44e-1}},
    {{15, 1.21e-1}, {23, 1.62e-1}, {18, 2.84e-1}, {12, 5.25e-1}},
    {{17, 8.94e-2}, {27, 1.17e-1}, {22, 1.95e-1}, {16, 3.38e-1}, {11, 5.54e-1}},
    {{20, 6.94e-2}, {31, 8.90e-2}, {26, 1.41e-1}, {20, 2.28e-1}, {14, 3.57e-1}, {11, 5.57e-1}},
};

// alpha_hat = 10^0 .. 10^6; symmetric, nonsymmetric
const std::vector<std::pair<Cell, Cell>> kTable4 = {
    {{23, 1.61e-1}, {23, 1.62e-1}}, {{26, 1.61e-1}, {26, 1.61e-1}}, {{27, 1.60e-1}, {27, 1.60e-1}},
    {{27, 1.60e-1}, {27, 1.60e-1}}, {{27, 1.60e-1}, {27, 1.60e-1}}, {{27, 1.60e-1}, {27, 1.60e-1}},
    {{27, 1.60e-1}, {27, 1.60e-1}},
};

void add_grid(std::vector<Golden>& out, TableName table, const Grid& grid, Variant variant) {
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const int n = 8 << r;
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      out.push_back({table, n, 4 << c, 1.0, variant, grid[r][c].iterations, grid[r][c].lambda});
    }
  }
}

std::vector<Golden> build_goldens() {
  std::vector<Golden> out;
  add_grid(out, TableName::table1, kTable1, Variant::symmetric);
  add_grid(out, TableName::table2, kTable2, Variant::symmetric);
  add_grid(out, TableName::table3, kTable3, Variant::nonsymmetric);
  double alpha = 1.0;
  for (const auto& [sym, nonsym] : kTable4) {
    out.push_back({TableName::table4, 64, 8, alpha, Variant::symmetric, sym.iterations, sym.lambda});
    out.push_back({TableName::table4, 64, 8, alpha, Variant::nonsymmetric, nonsym.iterations, nonsym.lambda});
    alpha *= 10.0;
  }
  return out;
}

std::string table_field(TableName t) {
  switch (t) {
    case TableName::table1:
      return "smooth1";
    case TableName::table2:
    case TableName::table3:
      return "smooth10";
    case TableName::table4:
      return "checkerboard";
  }
  return {};
}

}  // namespace

std::string to_string(TableName t) {
  switch (t) {
    case TableName::table1:
      return "table1";
    case TableName::table2:
      return "table2";
    case TableName::table3:
      return "table3";
    case TableName::table4:
      return "table4";
  }
  return {};
}

TableName table_from_string(const std::string& name) {
  if (name == "table1") return TableName::table1;
  if (name == "table2") return TableName::table2;
  if (name == "table3") return TableName::table3;
  if (name == "table4") return TableName::table4;
  throw std::invalid_argument("unknown table '" + name + "' (expected table1..table4)");
}

const std::vector<Golden>& goldens() {
  static const std::vector<Golden> all = build_goldens();
  return all;
}

std::optional<Golden> find_golden(TableName table, const ExperimentConfig& config) {
  if (config.field != table_field(table)) return std::nullopt;
  for (const auto& g : goldens()) {
    if (g.table != table || g.n != config.n || g.N != config.N || g.variant != config.variant) continue;
    if (table == TableName::table4 && std::abs(std::log10(g.alpha_hat / config.alpha_hat)) > 1e-9) continue;
    return g;
  }
  return std::nullopt;
}

std::vector<ExperimentConfig> table_configs(TableName table, bool full) {
  std::vector<ExperimentConfig> out;
  for (const auto& g : goldens()) {
    if (g.table != table || (!full && g.n > 128)) continue;
    ExperimentConfig c;
    c.n = g.n;
    c.N = g.N;
    c.field = table_field(table);
    c.alpha_hat = g.alpha_hat;
    c.variant = g.variant;
    out.push_back(c);
  }
  return out;
}

}  // namespace fveasm
