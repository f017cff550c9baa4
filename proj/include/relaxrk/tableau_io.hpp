#pragma once

// Plain-text tableau files: one section per tableau, each section nu rows of
// the coefficient matrix followed by one row of weights, sections separated by
// a line `---`, explicit tableau first.

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "relaxrk/tableau.hpp"

namespace relaxrk {

inline ImexTableau parse_imex_tableau(std::istream& is, const std::string& name,
                                      int declared_order) {
  std::vector<std::vector<std::vector<double>>> sections(1);
  std::string line;
  while (std::getline(is, line)) {
    std::string trimmed;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c)) || !trimmed.empty()) trimmed += c;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
      trimmed.pop_back();
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (trimmed == "---") {
      sections.emplace_back();
      continue;
    }
    std::stringstream ss(trimmed);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (!ss.eof()) throw invalid_input("tableau file: non-numeric token in row");
    sections.back().push_back(std::move(row));
  }
  if (sections.size() != 2)
    throw invalid_input("tableau file: expected two sections separated by ---");

  auto build = [](const std::vector<std::vector<double>>& rows, TableauKind kind) {
    if (rows.size() < 2)
      throw invalid_input("tableau file: section needs nu matrix rows plus weights");
    const std::size_t nu = rows.size() - 1;
    std::vector<std::vector<double>> a(rows.begin(), rows.begin() + nu);
    for (const auto& r : a)
      if (r.size() != nu)
        throw invalid_input("tableau file: matrix rows must have nu entries");
    std::vector<double> w = rows.back();
    if (w.size() != nu) throw invalid_input("tableau file: weight row must have nu entries");
    return make_tableau(std::move(a), std::move(w), kind);
  };

  ImexTableau t;
  t.name = name;
  t.declared_order = declared_order;
  t.explicit_part = build(sections[0], TableauKind::Explicit);
  t.implicit_part = build(sections[1], TableauKind::Dirk);
  if (t.explicit_part.nu != t.implicit_part.nu)
    throw invalid_input("tableau file: stage counts differ between sections");
  return t;
}

} // namespace relaxrk
