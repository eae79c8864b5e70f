#include "fveasm/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace fveasm {

namespace {

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

// 5.80e-1 rather than 5.80e-01, the way the tables print it
std::string short_sci(double value) {
  std::string s = fmt("%.2e", value);
  const auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string mantissa = s.substr(0, e);
  std::string exponent = s.substr(e + 1);
  std::string sign;
  if (exponent[0] == '-' || exponent[0] == '+') {
    if (exponent[0] == '-') sign = "-";
    exponent.erase(0, 1);
  }
  while (exponent.size() > 1 && exponent[0] == '0') exponent.erase(0, 1);
  return mantissa + "e" + sign + exponent;
}

std::string fraction(int n) { return "1/" + std::to_string(n); }

std::string power_of_ten(double alpha) {
  const double e = std::log10(alpha);
  if (std::abs(e - std::round(e)) < 1e-9) return "10^" + std::to_string(static_cast<int>(std::round(e)));
  return fmt("%g", alpha);
}

std::string cell_text(const TableRow& r) {
  if (!r.ok()) return "error";
  std::string s = std::to_string(r.iterations) + " (" + short_sci(r.lambda_min) + ")";
  if (!r.converged) s += " no conv.";
  if (!r.within_tolerance && r.expected_iterations) {
    s += " [expected " + std::to_string(*r.expected_iterations) + " (" + short_sci(*r.expected_lambda) + ")]";
  }
  return s;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string table_caption(TableName t) {
  switch (t) {
    case TableName::table1:
      return "A = 2 + sin(pi x) sin(pi y), symmetric variant";
    case TableName::table2:
      return "A = 2 + sin(10 pi x) sin(10 pi y), symmetric variant";
    case TableName::table3:
      return "A = 2 + sin(10 pi x) sin(10 pi y), nonsymmetric variant";
    case TableName::table4:
      return "checkerboard alpha_1 (2 + sin(10 pi x) sin(10 pi y)), h = 1/64, H = 1/8";
  }
  return {};
}

void grid_layout(std::ostream& out, const TableResult& result) {
  std::set<int> hs;
  std::set<int> Hs;
  std::map<std::pair<int, int>, const TableRow*> cells;
  for (const auto& r : result.rows) {
    hs.insert(r.config.n);
    Hs.insert(r.config.N);
    cells[{r.config.n, r.config.N}] = &r;
  }
  out << "| h \\ H |";
  for (int N : Hs) out << ' ' << fraction(N) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < Hs.size(); ++i) out << "---|";
  out << '\n';
  for (int n : hs) {
    out << "| " << fraction(n) << " |";
    for (int N : Hs) {
      const auto it = cells.find({n, N});
      out << ' ' << (it == cells.end() ? std::string() : cell_text(*it->second)) << " |";
    }
    out << '\n';
  }
}

void alpha_layout(std::ostream& out, const TableResult& result) {
  std::map<double, std::pair<const TableRow*, const TableRow*>> by_alpha;
  for (const auto& r : result.rows) {
    auto& slot = by_alpha[r.config.alpha_hat];
    (r.config.variant == Variant::symmetric ? slot.first : slot.second) = &r;
  }
  out << "| alpha_hat | Symmetric variant | Nonsymmetric variant |\n|---|---|---|\n";
  for (const auto& [alpha, pair] : by_alpha) {
    out << "| " << power_of_ten(alpha) << " | " << (pair.first ? cell_text(*pair.first) : "") << " | "
        << (pair.second ? cell_text(*pair.second) : "") << " |\n";
  }
}

std::string estimate_text(const std::optional<SpectralEstimate>& e) {
  if (!e) return "-";
  return fmt("%.4f", e->value) + (e->converged ? "" : "*");
}

}  // namespace

std::string format_markdown(const TableResult& result) {
  std::ostringstream out;
  out << "## " << to_string(result.name) << ": " << table_caption(result.name) << "\n\n";
  out << "Iterations and lambda_min (in parentheses)";
  if (result.name != TableName::table4) out << (result.full ? ", full scope" : ", h >= 1/128");
  out << ".\n\n";
  if (result.name == TableName::table4) {
    alpha_layout(out, result);
  } else {
    grid_layout(out, result);
  }

  out << "\n| h | H | alpha_hat | variant | iters | expected | lambda_min | expected | beta1 | beta2 | envelope | "
         "verdict |\n|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  int good = 0;
  for (const auto& r : result.rows) {
    const auto& c = r.config;
    out << "| " << fraction(c.n) << " | " << fraction(c.N) << " | " << power_of_ten(c.alpha_hat) << " | "
        << to_string(c.variant) << " | ";
    if (!r.ok()) {
      out << "error: " << r.error << " | | | | | | | FAIL |\n";
      continue;
    }
    out << r.iterations << " | " << (r.expected_iterations ? std::to_string(*r.expected_iterations) : "-")
        << " | " << fmt("%.4f", r.lambda_min) << " | "
        << (r.expected_lambda ? short_sci(*r.expected_lambda) : "-") << " | " << estimate_text(r.beta1)
        << " | " << estimate_text(r.beta2) << " | "
        << (r.envelope.applicable ? (r.envelope.passed ? "ok" : "VIOLATED") : "-") << " | ";
    const bool pass = r.converged && r.within_tolerance && (!r.envelope.applicable || r.envelope.passed);
    good += pass ? 1 : 0;
    out << (pass ? "pass" : "FAIL") << " |\n";
  }
  out << "\n" << good << " of " << result.rows.size() << " cells pass (iterations +-2, lambda_min 5%";
  out << ", residual envelope where beta estimates exist). A '*' marks an unconverged Lanczos estimate.\n";
  return out.str();
}

std::string format_csv(const std::vector<TableRow>& rows, const std::string& table) {
  std::ostringstream out;
  out << "table,h,H,field,alpha_hat,variant,iterations,converged,lambda_min,beta1,beta2,envelope,"
         "expected_iterations,expected_lambda,within_tolerance,error\n";
  for (const auto& r : rows) {
    const auto& c = r.config;
    out << table << ',' << fraction(c.n) << ',' << fraction(c.N) << ',' << c.field << ','
        << fmt("%g", c.alpha_hat) << ',' << to_string(c.variant) << ',';
    if (r.ok()) {
      out << r.iterations << ',' << (r.converged ? "true" : "false") << ',' << fmt("%.6e", r.lambda_min)
          << ',' << (r.beta1 ? fmt("%.6e", r.beta1->value) : "") << ','
          << (r.beta2 ? fmt("%.6e", r.beta2->value) : "") << ','
          << (r.envelope.applicable ? (r.envelope.passed ? "ok" : "violated") : "");
    } else {
      out << ",,,,,";
    }
    out << ',' << (r.expected_iterations ? std::to_string(*r.expected_iterations) : "") << ','
        << (r.expected_lambda ? fmt("%.3e", *r.expected_lambda) : "") << ','
        << (r.within_tolerance ? "true" : "false") << ',' << csv_quote(r.error) << '\n';
  }
  return out.str();
}

std::string format_single_markdown(const TableRow& r) {
  std::ostringstream out;
  const auto& c = r.config;
  out << "| quantity | value |\n|---|---|\n";
  out << "| h | " << fraction(c.n) << " |\n| H | " << fraction(c.N) << " |\n| field | " << c.field << " |\n";
  if (c.field == "checkerboard") out << "| alpha_hat | " << fmt("%g", c.alpha_hat) << " |\n";
  out << "| variant | " << to_string(c.variant) << " |\n| tol | " << fmt("%g", c.tol) << " |\n";
  if (!r.ok()) {
    out << "| error | " << r.error << " |\n";
    return out.str();
  }
  out << "| iterations | " << r.iterations << (r.converged ? "" : " (not converged)") << " |\n";
  out << "| lambda_min (Ritz) | " << fmt("%.6f", r.lambda_min) << " |\n";
  if (r.beta1) {
    out << "| beta1 (" << to_string(r.beta1->method) << ") | " << estimate_text(r.beta1) << " |\n";
    out << "| beta2 (" << to_string(r.beta2->method) << ") | " << estimate_text(r.beta2) << " |\n";
    out << "| residual envelope | " << (r.envelope.passed ? "holds" : "violated")
        << fmt(" (worst margin %.3e)", r.envelope.worst_margin) << " |\n";
  }
  out << "| Arnoldi a-orthogonality error | " << fmt("%.2e", r.orthogonality_error) << " |\n";
  if (r.direct_error) {
    out << "| a-norm error vs direct solve | " << fmt("%.2e", *r.direct_error) << " |\n";
    out << "| direct solution consistency | " << fmt("%.2e", *r.rhs_consistency) << " |\n";
  }
  if (r.expected_iterations) {
    out << "| expected | " << *r.expected_iterations << " (" << short_sci(*r.expected_lambda) << ") |\n";
    out << "| within tolerance | " << (r.within_tolerance ? "yes" : "no") << " |\n";
  }
  out << "| seconds | " << fmt("%.2f", r.seconds) << " |\n";
  return out.str();
}

std::string format_properties(const PropertyReport& report) {
  std::ostringstream out;
  for (const auto& v : report.verdicts) {
    out << (v.passed ? "PASS " : "FAIL ") << v.name;
    if (!v.detail.empty()) out << ": " << v.detail;
    out << '\n';
  }
  return out.str();
}

}  // namespace fveasm
