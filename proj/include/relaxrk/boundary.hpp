#pragma once

// Ghost-cell boundary handling: periodic wrap, zero-gradient outflow, fixed
// inflow states, and reflective walls that mirror the state and flip the
// model's velocity-like components.

#include <span>
#include <vector>

#include "relaxrk/errors.hpp"
#include "relaxrk/grid.hpp"

namespace relaxrk {

enum class BoundaryKind { Periodic, Inflow, Outflow, ReflectiveWall };

struct BoundarySide {
  BoundaryKind kind = BoundaryKind::Periodic;
  std::vector<double> inflow_state;  // used by Inflow only
};

struct BoundaryCondition {
  BoundarySide left;
  BoundarySide right;

  static BoundaryCondition periodic() { return {}; }
  static BoundaryCondition outflow() {
    return {{BoundaryKind::Outflow, {}}, {BoundaryKind::Outflow, {}}};
  }

  bool is_periodic() const {
    return left.kind == BoundaryKind::Periodic || right.kind == BoundaryKind::Periodic;
  }
  void validate(std::size_t components) const {
    if ((left.kind == BoundaryKind::Periodic) != (right.kind == BoundaryKind::Periodic))
      throw invalid_input("boundary: periodic must be applied to both sides");
    for (const BoundarySide* s : {&left, &right})
      if (s->kind == BoundaryKind::Inflow && s->inflow_state.size() != components)
        throw invalid_input("boundary: inflow state has wrong component count");
  }
};

// Extend the field by `depth` ghost nodes per side; interior node j lands at
// index j + depth of the result.
inline FieldArray ghost_fill(const FieldArray& f, const BoundaryCondition& bc,
                             std::size_t depth,
                             std::span<const int> velocity_components = {}) {
  const std::size_t n = f.nodes();
  const std::size_t m = f.components();
  if (depth < 1) throw invalid_input("ghost_fill: depth must be >= 1");
  bc.validate(m);
  if (bc.is_periodic() && depth > n)
    throw invalid_input("ghost_fill: periodic depth exceeds grid size");

  FieldArray out(n + 2 * depth, m);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < m; ++k) out(j + depth, k) = f(j, k);

  auto mirror = [&](std::span<const double> src, std::span<double> dst) {
    for (std::size_t k = 0; k < m; ++k) dst[k] = src[k];
    for (int k : velocity_components) dst[static_cast<std::size_t>(k)] = -src[static_cast<std::size_t>(k)];
  };

  for (std::size_t d = 1; d <= depth; ++d) {
    std::span<double> gl = out.state(depth - d);
    std::span<double> gr = out.state(depth + n + d - 1);
    switch (bc.left.kind) {
      case BoundaryKind::Periodic:
        for (std::size_t k = 0; k < m; ++k) gl[k] = f(n - d, k);
        break;
      case BoundaryKind::Outflow:
        for (std::size_t k = 0; k < m; ++k) gl[k] = f(0, k);
        break;
      case BoundaryKind::Inflow:
        for (std::size_t k = 0; k < m; ++k) gl[k] = bc.left.inflow_state[k];
        break;
      case BoundaryKind::ReflectiveWall:
        mirror(f.state(d - 1), gl);
        break;
    }
    switch (bc.right.kind) {
      case BoundaryKind::Periodic:
        for (std::size_t k = 0; k < m; ++k) gr[k] = f(d - 1, k);
        break;
      case BoundaryKind::Outflow:
        for (std::size_t k = 0; k < m; ++k) gr[k] = f(n - 1, k);
        break;
      case BoundaryKind::Inflow:
        for (std::size_t k = 0; k < m; ++k) gr[k] = bc.right.inflow_state[k];
        break;
      case BoundaryKind::ReflectiveWall:
        mirror(f.state(n - d), gr);
        break;
    }
  }
  return out;
}

} // namespace relaxrk
