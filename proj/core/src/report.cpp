#include "meshcoop/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace meshcoop {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "-";
  if (v == 0.0) v = 0.0;  // no "-0.0000"
  std::string s = fmt::format("{:.4f}", v);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

// Left-aligned first column, right-aligned numeric columns.
void print_aligned(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return;
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) line += "  ";
      const std::string pad(width[c] - r[c].size(), ' ');
      line += c == 0 ? r[c] + pad : pad + r[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
}

void print_csv(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) os << ',';
      const bool quote = r[c].find_first_of(",\"") != std::string::npos;
      if (quote) {
        os << '"';
        for (char ch : r[c]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
        os << '"';
      } else {
        os << r[c];
      }
    }
    os << '\n';
  }
}

void emit(std::ostream& os, const std::vector<std::vector<std::string>>& rows, bool csv) {
  if (csv) {
    print_csv(os, rows);
  } else {
    print_aligned(os, rows);
  }
}

}  // namespace

void print_values(std::ostream& os, const CharacteristicFunction& cf, bool csv) {
  std::vector<std::vector<std::string>> rows{{"coalition", "v"}};
  const Coalition::Mask full = cf.grand().mask();
  // By size, then mask.
  std::vector<Coalition> all;
  for (Coalition::Mask s = 0; s <= full; ++s) all.push_back(Coalition::from_mask(s));
  std::stable_sort(all.begin(), all.end(), [](Coalition a, Coalition b) { return a.size() < b.size(); });
  for (Coalition c : all) rows.push_back({c.to_string(), cf.has(c) ? num(cf(c)) : "-"});
  emit(os, rows, csv);
}

void print_value(std::ostream& os, const CharacteristicFunction& cf, Coalition coalition, bool csv) {
  emit(os, {{"coalition", "v"}, {coalition.to_string(), num(cf(coalition))}}, csv);
}

void print_allocation(std::ostream& os, const CharacteristicFunction& cf, const Allocation& x, bool csv) {
  std::vector<std::vector<std::string>> rows{{"provider", to_string(x.method), "standalone"}};
  for (ProviderId m = 1; m <= cf.providers(); ++m) {
    rows.push_back({"SP" + std::to_string(m), num(x[m]), num(cf(Coalition::singleton(m)))});
  }
  rows.push_back({"total", num(x.total()), ""});
  rows.push_back({"v(M)", num(cf(cf.grand())), ""});
  emit(os, rows, csv);
  if (!csv && x.degenerate) os << "note: degenerate optimal basis; dual prices may not be unique\n";
}

void print_core_report(std::ostream& os, const CoreReport& r, bool csv) {
  if (csv) {
    std::vector<std::vector<std::string>> rows{{"coalition", "deficit"}};
    for (const auto& v : r.violated_coalitions) rows.push_back({v.coalition.to_string(), num(v.deficit)});
    os << "in_core," << (r.in_core ? "true" : "false") << '\n';
    os << "is_imputation," << (r.is_imputation ? "true" : "false") << '\n';
    os << "efficiency_gap," << num(r.efficiency_gap) << '\n';
    print_csv(os, rows);
    return;
  }
  os << "imputation:     " << (r.is_imputation ? "yes" : "no") << '\n';
  os << "efficiency gap: " << num(r.efficiency_gap) << '\n';
  os << "in core:        " << (r.in_core ? "yes" : "no") << '\n';
  if (!r.violated_coalitions.empty()) {
    std::vector<std::vector<std::string>> rows{{"violated coalition", "deficit v(S)-x(S)"}};
    for (const auto& v : r.violated_coalitions) rows.push_back({v.coalition.to_string(), num(v.deficit)});
    print_aligned(os, rows);
  }
}

void print_breakdown(std::ostream& os, const PayoffBreakdown& b, bool csv) {
  std::vector<std::vector<std::string>> rows{{"provider", "revenue", "routing_cost", "net"}};
  double rev = 0, cost = 0;
  for (const auto& p : b.providers) {
    rows.push_back({"SP" + std::to_string(p.provider), num(p.revenue), num(p.routing_cost), num(p.net)});
    rev += p.revenue;
    cost += p.routing_cost;
  }
  rows.push_back({"total", num(rev), num(cost), num(b.total_net())});
  emit(os, rows, csv);
}

void print_structure_table(std::ostream& os, const PayoffMatrix& table, bool csv) {
  std::vector<std::string> header{"structure"};
  for (int m = 1; m <= table.providers; ++m) header.push_back("mu" + std::to_string(m));
  for (int m = 1; m <= table.providers; ++m) header.push_back("phi" + std::to_string(m));
  header.push_back("v");
  std::vector<std::vector<std::string>> rows{header};
  for (const auto& row : table.rows) {
    std::vector<std::string> r{row.structure.to_string()};
    for (double v : row.dual_payoff) r.push_back(num(v));
    for (double v : row.shapley) r.push_back(num(v));
    r.push_back(num(row.value));
    rows.push_back(std::move(r));
  }
  emit(os, rows, csv);
}

}  // namespace meshcoop
