#pragma once

// Named test problems: grid, initial state, and boundary conditions for the
// smooth and Riemann Broadwell runs, the shallow-water sine, the traffic
// Riemann problem, and the supersonic granular inflow.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "relaxrk/boundary.hpp"
#include "relaxrk/grid.hpp"
#include "relaxrk/models.hpp"

namespace relaxrk {

struct TestProblem {
  std::string model_name;
  Grid1D grid;
  FieldArray state;
  BoundaryCondition bc;
};

struct InitialDataParams {
  double a_z = 1.0;  // broadwell-smooth equilibrium factor: 1.0 well prepared, 0.2 layered
  GranularParams granular;
};

inline const std::vector<std::string>& initial_condition_names() {
  static const std::vector<std::string> names = {
      "broadwell-smooth", "broadwell-rim1", "broadwell-rim2",
      "shallow-sine", "traffic-riemann", "granular-inflow"};
  return names;
}

inline TestProblem initial_conditions(const std::string& name, std::size_t n,
                                      const InitialDataParams& params = {}) {
  using std::numbers::pi;
  TestProblem tp;

  if (name == "broadwell-smooth") {
    // rho = 1 + 0.3 sin(2 pi x / 20), v = 1/2 + 0.1 sin(2 pi x / 20),
    // z = a_z z_E on a periodic box of length 20
    const double L = 20.0;
    tp.model_name = "broadwell";
    tp.grid = Grid1D(0.0, L, n);
    tp.state = FieldArray(n, 3);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = tp.grid.x(j);
      const double rho = 1.0 + 0.3 * std::sin(2.0 * pi * x / L);
      const double v = 0.5 + 0.1 * std::sin(2.0 * pi * x / L);
      const double m = rho * v;
      tp.state(j, 0) = rho;
      tp.state(j, 1) = m;
      tp.state(j, 2) = params.a_z * 0.5 * (rho * rho + m * m) / rho;
    }
    tp.bc = BoundaryCondition::periodic();
  } else if (name == "broadwell-rim1" || name == "broadwell-rim2") {
    const bool first = name == "broadwell-rim1";
    const double split = first ? 0.2 : 0.0;
    const double left_1[3] = {2.0, 1.0, 1.0};
    const double right_1[3] = {1.0, 0.13962, 1.0};
    const double left_2[3] = {1.0, 0.0, 1.0};
    const double right_2[3] = {0.2, 0.0, 1.0};
    const double* left = first ? left_1 : left_2;
    const double* right = first ? right_1 : right_2;
    tp.model_name = "broadwell";
    tp.grid = Grid1D(-1.0, 1.0, n);
    tp.state = FieldArray(n, 3);
    for (std::size_t j = 0; j < n; ++j) {
      const double* s = tp.grid.x(j) < split ? left : right;
      for (std::size_t k = 0; k < 3; ++k) tp.state(j, k) = s[k];
    }
    tp.bc = BoundaryCondition::outflow();
  } else if (name == "shallow-sine") {
    // h = 1 + 0.2 sin(8 pi x), hv = h^2/2 (on the equilibrium manifold)
    tp.model_name = "shallow-water";
    tp.grid = Grid1D(0.0, 1.0, n);
    tp.state = FieldArray(n, 2);
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1.0 + 0.2 * std::sin(8.0 * pi * tp.grid.x(j));
      tp.state(j, 0) = h;
      tp.state(j, 1) = 0.5 * h * h;
    }
    tp.bc = BoundaryCondition::periodic();
  } else if (name == "traffic-riemann") {
    // (rho, v) = (0.05, 0.05) | (0.05, 0.5) split at x = 0, stored as (rho, rho w)
    tp.model_name = "traffic";
    tp.grid = Grid1D(-2.0, 2.0, n);
    tp.state = FieldArray(n, 2);
    const TrafficParams tpar;
    const detail::TrafficFns fns{tpar};
    for (std::size_t j = 0; j < n; ++j) {
      const double rho = 0.05;
      const double v = tp.grid.x(j) < 0.0 ? 0.05 : 0.5;
      tp.state(j, 0) = rho;
      tp.state(j, 1) = rho * (v + fns.pressure(rho));
    }
    tp.bc = BoundaryCondition::outflow();
  } else if (name == "granular-inflow") {
    // uniform supersonic stream entering from the left, wall on the right;
    // T recovered from the stated pressure through p = rho T (1 + 2(1+e)G)
    tp.model_name = "granular";
    tp.grid = Grid1D(0.0, 10.0, n);
    tp.state = FieldArray(n, 3);
    const double rho = 34.37746770;
    const double v = 18.0;
    const double p = 1589.2685472;
    const detail::GranularFns fns{params.granular};
    const double T = p / (rho * (1.0 + 2.0 * (1.0 + params.granular.e_rest) *
                                           fns.correlation(rho)));
    const double E = 0.5 * rho * v * v + 1.5 * rho * T;
    std::vector<double> inflow = {rho, rho * v, E};
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < 3; ++k) tp.state(j, k) = inflow[k];
    tp.bc.left = {BoundaryKind::Inflow, inflow};
    tp.bc.right = {BoundaryKind::ReflectiveWall, {}};
  } else {
    std::string msg = "unknown initial condition '" + name + "'; valid names:";
    for (const auto& s : initial_condition_names()) msg += " " + s;
    throw invalid_input(msg);
  }
  return tp;
}

inline Model make_model(const std::string& name, const InitialDataParams& params = {}) {
  if (name == "broadwell") return make_broadwell();
  if (name == "shallow-water") return make_shallow_water();
  if (name == "traffic") return make_traffic();
  if (name == "granular") return make_granular(params.granular);
  throw invalid_input("unknown model '" + name +
                      "'; valid names: broadwell shallow-water traffic granular");
}

} // namespace relaxrk
