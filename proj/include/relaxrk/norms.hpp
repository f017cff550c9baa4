#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "relaxrk/errors.hpp"
#include "relaxrk/grid.hpp"

namespace relaxrk {

enum class Norm { L1, LInf };

// Relative error of one component: sum|a-b| / sum|b| or max|a-b| / max|b|.
inline double error_norm(const FieldArray& a, const FieldArray& b, std::size_t component,
                         Norm norm = Norm::L1) {
  if (a.nodes() != b.nodes() || a.components() != b.components())
    throw invalid_input("error_norm: field shapes differ");
  if (component >= a.components()) throw invalid_input("error_norm: bad component index");
  if (norm == Norm::L1) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.nodes(); ++j) {
      num += std::abs(a(j, component) - b(j, component));
      den += std::abs(b(j, component));
    }
    if (den == 0.0) throw invalid_input("error_norm: zero reference norm");
    return num / den;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < a.nodes(); ++j) {
    num = std::max(num, std::abs(a(j, component) - b(j, component)));
    den = std::max(den, std::abs(b(j, component)));
  }
  if (den == 0.0) throw invalid_input("error_norm: zero reference norm");
  return num / den;
}

} // namespace relaxrk
