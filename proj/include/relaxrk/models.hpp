#pragma once

// The four relaxation systems: Broadwell rarefied-gas kinetics, shallow water
// with a Burgers limit, the Aw-Rascle traffic model with a Lighthill-Whitham
// limit, and dense granular-gas Euler with an inelastic energy sink.

#include <cmath>
#include <numbers>
#include <string>

#include "relaxrk/model.hpp"

namespace relaxrk {

// ---------------------------------------------------------------------------
// Broadwell: U = (rho, m, z), F = (m, z, m),
// R = (0, 0, (rho^2 + m^2 - 2 rho z)/2), conserved (rho, m),
// equilibrium z_E = (rho^2 + m^2)/(2 rho), limit G = (rho v, (rho + rho v^2)/2).

inline Model make_broadwell() {
  Model md;
  md.name = "broadwell";
  md.components = 3;
  md.conserved = 2;
  md.flux = [](std::span<const double> U, std::span<double> out) {
    out[0] = U[1];
    out[1] = U[2];
    out[2] = U[1];
  };
  md.relax = [](std::span<const double> U, std::span<double> out) {
    out[0] = 0.0;
    out[1] = 0.0;
    out[2] = 0.5 * (U[0] * U[0] + U[1] * U[1] - 2.0 * U[0] * U[2]);
  };
  md.project = [](std::span<const double> U, std::span<double> out) {
    out[0] = U[0];
    out[1] = U[1];
  };
  md.equilibrium = [](std::span<const double> u, std::span<double> out) {
    out[0] = u[0];
    out[1] = u[1];
    out[2] = 0.5 * (u[0] * u[0] + u[1] * u[1]) / u[0];
  };
  md.limit_flux = [](std::span<const double> u, std::span<double> out) {
    const double v = u[1] / u[0];
    out[0] = u[0] * v;
    out[1] = 0.5 * (u[0] + u[0] * v * v);
  };
  // characteristic speeds of F are {-1, 0, 1}
  md.wave_speed_bound = [](std::span<const double>) { return 1.0; };
  md.limit_wave_speed_bound = [](std::span<const double> u) {
    const double v = u[1] / u[0];
    const double disc = 2.0 - v * v;
    return disc > 0.0 ? 0.5 * (std::abs(v) + std::sqrt(disc)) : std::abs(v);
  };
  // z-equation is linear in z for fixed (rho, m)
  md.stage_solve = [](std::span<const double> B, double mu, std::span<double> out) {
    const double rho = B[0], mom = B[1];
    if (rho <= 0.0) throw numerical_failure("broadwell stage solve: nonpositive density");
    out[0] = rho;
    out[1] = mom;
    out[2] = (B[2] + mu * 0.5 * (rho * rho + mom * mom)) / (1.0 + mu * rho);
    return 0;
  };
  md.velocity_components = {1};
  return md;
}

// ---------------------------------------------------------------------------
// Shallow water: U = (h, q) with q = h v, F = (q, h + h^2/2),
// R = (0, h^2/2 - q), conserved h, equilibrium q = h^2/2, Burgers limit.

inline Model make_shallow_water() {
  Model md;
  md.name = "shallow-water";
  md.components = 2;
  md.conserved = 1;
  md.flux = [](std::span<const double> U, std::span<double> out) {
    out[0] = U[1];
    out[1] = U[0] + 0.5 * U[0] * U[0];
  };
  md.relax = [](std::span<const double> U, std::span<double> out) {
    out[0] = 0.0;
    out[1] = 0.5 * U[0] * U[0] - U[1];
  };
  md.project = [](std::span<const double> U, std::span<double> out) { out[0] = U[0]; };
  md.equilibrium = [](std::span<const double> u, std::span<double> out) {
    out[0] = u[0];
    out[1] = 0.5 * u[0] * u[0];
  };
  md.limit_flux = [](std::span<const double> u, std::span<double> out) {
    out[0] = 0.5 * u[0] * u[0];
  };
  // flux Jacobian eigenvalues are +-sqrt(1 + h)
  md.wave_speed_bound = [](std::span<const double> U) {
    if (U[0] <= 0.0) throw numerical_failure("shallow water: nonpositive height");
    return std::sqrt(1.0 + U[0]);
  };
  md.limit_wave_speed_bound = [](std::span<const double> u) { return std::abs(u[0]); };
  // momentum equation is linear in q
  md.stage_solve = [](std::span<const double> B, double mu, std::span<double> out) {
    const double h = B[0];
    if (h <= 0.0) throw numerical_failure("shallow water stage solve: nonpositive height");
    out[0] = h;
    out[1] = (B[1] + mu * 0.5 * h * h) / (1.0 + mu);
    return 0;
  };
  md.velocity_components = {1};
  return md;
}

// ---------------------------------------------------------------------------
// Aw-Rascle traffic: conserved (rho, y) with y = rho w, w = v + P(rho),
// P = c_v ln(rho/rho_m) at gamma = 0, equilibrium speed V(rho) from the
// arctangent fit, relax = (0, A rho (V(rho) - v)); the relaxation time T is
// the epsilon of the run.  Limit is Lighthill-Whitham rho V(rho).

struct TrafficParams {
  double A = 1.0;
  double c_v = 2.0;
  double gamma = 0.0;
  double rho_m = 1.0;
  double v_m = 1.0;
  double alpha = 11.0;
  double beta = 0.22;
};

namespace detail {

struct TrafficFns {
  TrafficParams p;
  double pressure(double rho) const {
    if (p.gamma > 0.0)
      return p.c_v / p.gamma * std::pow(rho / p.rho_m, p.gamma);
    return p.c_v * std::log(rho / p.rho_m);
  }
  double dpressure(double rho) const {
    if (p.gamma > 0.0) return p.c_v * std::pow(rho / p.rho_m, p.gamma) / rho;
    return p.c_v / rho;
  }
  double eq_speed(double rho) const {
    const double u = rho / p.rho_m;
    if (u >= 1.0) return 0.0;  // one-sided limit at the maximal density
    const double half_pi = std::numbers::pi / 2.0;
    const double arg = p.alpha * (u - p.beta) / (u - 1.0);
    return p.v_m * (half_pi + std::atan(arg)) / (half_pi + std::atan(p.alpha * p.beta));
  }
  void check_admissible(double rho) const {
    if (!(rho > 0.0) || !(rho < p.rho_m))
      throw numerical_failure("traffic: density outside (0, rho_m)");
  }
};

} // namespace detail

inline Model make_traffic(const TrafficParams& params = {}) {
  detail::TrafficFns fns{params};

  // subcharacteristic condition -P'(rho) <= V'(rho) <= 0 for the configured
  // constants, checked on a density sweep
  for (int i = 1; i <= 99; ++i) {
    const double rho = 0.01 * i * params.rho_m;
    const double h = 1e-6 * params.rho_m;
    const double dV = (fns.eq_speed(rho + h) - fns.eq_speed(rho - h)) / (2.0 * h);
    if (dV > 1e-8 || dV < -fns.dpressure(rho) - 1e-8)
      throw invalid_input("traffic: subcharacteristic condition violated at rho = " +
                          std::to_string(rho));
  }

  Model md;
  md.name = "traffic";
  md.components = 2;
  md.conserved = 1;  // only the density survives Q; the limit is Lighthill-Whitham
  md.flux = [fns](std::span<const double> U, std::span<double> out) {
    const double rho = U[0], y = U[1];
    fns.check_admissible(rho);
    const double v = y / rho - fns.pressure(rho);
    out[0] = rho * v;
    out[1] = v * y;
  };
  md.relax = [fns](std::span<const double> U, std::span<double> out) {
    const double rho = U[0], y = U[1];
    fns.check_admissible(rho);
    const double v = y / rho - fns.pressure(rho);
    out[0] = 0.0;
    out[1] = fns.p.A * rho * (fns.eq_speed(rho) - v);
  };
  md.project = [](std::span<const double> U, std::span<double> out) { out[0] = U[0]; };
  md.equilibrium = [fns](std::span<const double> u, std::span<double> out) {
    out[0] = u[0];
    out[1] = u[0] * (fns.eq_speed(u[0]) + fns.pressure(u[0]));
  };
  md.limit_flux = [fns](std::span<const double> u, std::span<double> out) {
    out[0] = u[0] * fns.eq_speed(u[0]);
  };
  // eigenvalues are v and v - rho P'(rho)
  md.wave_speed_bound = [fns](std::span<const double> U) {
    const double rho = U[0], y = U[1];
    fns.check_admissible(rho);
    const double v = y / rho - fns.pressure(rho);
    return std::max(std::abs(v), std::abs(v - rho * fns.dpressure(rho)));
  };
  md.limit_wave_speed_bound = [fns](std::span<const double> u) {
    const double rho = u[0];
    const double h = 1e-7;
    const double dV = (fns.eq_speed(rho + h) - fns.eq_speed(rho - h)) / (2.0 * h);
    return std::abs(fns.eq_speed(rho) + rho * dV);
  };
  // y-equation is linear in y for fixed rho
  md.stage_solve = [fns](std::span<const double> B, double mu, std::span<double> out) {
    const double rho = B[0];
    fns.check_admissible(rho);
    const double weq = fns.eq_speed(rho) + fns.pressure(rho);
    out[0] = rho;
    out[1] = (B[1] + mu * fns.p.A * rho * weq) / (1.0 + mu * fns.p.A);
    return 0;
  };
  return md;
}

// ---------------------------------------------------------------------------
// Granular gas: U = (rho, rho u, E) with E = rho u^2/2 + 3 rho T / 2,
// p = rho T (1 + 2 (1+e) G(rho)), inelastic sink -(1-e^2) G(rho) rho^2 T^{3/2}
// in the energy equation, gravity as a non-stiff momentum source.  The stiff
// limit (T = 0, pressureless dynamics) is not exercised, so the limit system
// is disabled.

struct GranularParams {
  double e_rest = 0.97;
  double sigma = 0.1;
  double g_grav = 1.0;
  double nu_max = 0.64994;  // 3-D random close-packing constant
};

namespace detail {

struct GranularFns {
  GranularParams p;

  double volume_fraction(double rho) const {
    return p.sigma * p.sigma * p.sigma * rho * std::numbers::pi / 6.0;
  }
  double correlation(double rho) const {
    const double nu = volume_fraction(rho);
    if (nu >= p.nu_max)
      throw numerical_failure("granular: volume fraction at or beyond close packing");
    return nu / (1.0 - std::pow(nu / p.nu_max, 4.0 * p.nu_max / 3.0));
  }
  double temperature(double rho, double mom, double E) const {
    return 2.0 * (E - 0.5 * mom * mom / rho) / (3.0 * rho);
  }
  double pressure(double rho, double T) const {
    return rho * T * (1.0 + 2.0 * (1.0 + p.e_rest) * correlation(rho));
  }
  double sink_coefficient(double rho) const {
    return (1.0 - p.e_rest * p.e_rest) * correlation(rho) * rho * rho;
  }
};

} // namespace detail

inline Model make_granular(const GranularParams& params = {}) {
  detail::GranularFns fns{params};

  Model md;
  md.name = "granular";
  md.components = 3;
  md.conserved = 2;
  md.has_limit_system = false;
  md.flux = [fns](std::span<const double> U, std::span<double> out) {
    const double rho = U[0], mom = U[1], E = U[2];
    if (rho <= 0.0) throw numerical_failure("granular: nonpositive density");
    const double u = mom / rho;
    const double T = std::max(0.0, fns.temperature(rho, mom, E));
    const double p = fns.pressure(rho, T);
    out[0] = mom;
    out[1] = mom * u + p;
    out[2] = u * (E + p);
  };
  md.relax = [fns](std::span<const double> U, std::span<double> out) {
    const double rho = U[0], mom = U[1], E = U[2];
    if (rho <= 0.0) throw numerical_failure("granular: nonpositive density");
    const double T = std::max(0.0, fns.temperature(rho, mom, E));
    out[0] = 0.0;
    out[1] = 0.0;
    out[2] = -fns.sink_coefficient(rho) * T * std::sqrt(T);
  };
  md.project = [](std::span<const double> U, std::span<double> out) {
    out[0] = U[0];
    out[1] = U[1];
  };
  md.equilibrium = [](std::span<const double> u, std::span<double> out) {
    out[0] = u[0];
    out[1] = u[1];
    out[2] = 0.5 * u[1] * u[1] / u[0];  // T = 0
  };
  md.explicit_source = [fns](std::span<const double> U, std::span<double> out) {
    out[0] = 0.0;
    out[1] = U[0] * fns.p.g_grav;
    out[2] = 0.0;
  };
  // no eigenvalue formula for the dense-gas corrections; overestimate with an
  // ideal-gas-like sound speed and a 1.2 safety factor (extra LLF dissipation
  // is stable, an underestimate is not)
  md.wave_speed_bound = [fns](std::span<const double> U) {
    const double rho = U[0], mom = U[1], E = U[2];
    if (rho <= 0.0) throw numerical_failure("granular: nonpositive density");
    const double u = mom / rho;
    const double T = std::max(0.0, fns.temperature(rho, mom, E));
    const double c2 = (5.0 / 3.0) * fns.pressure(rho, T) / rho;
    return 1.2 * (std::abs(u) + std::sqrt(std::max(0.0, c2)));
  };
  md.limit_wave_speed_bound = [](std::span<const double> u) {
    return std::abs(u[1] / u[0]);
  };
  // scalar equation E = B_E - mu K T(E)^{3/2}; the right side is monotone
  // decreasing in E, solved by Newton safeguarded with bisection
  md.stage_solve = [fns](std::span<const double> B, double mu, std::span<double> out) {
    const double rho = B[0], mom = B[1];
    if (rho <= 0.0) throw numerical_failure("granular stage solve: nonpositive density");
    out[0] = rho;
    out[1] = mom;
    const double e_kin = 0.5 * mom * mom / rho;
    const double K = mu * fns.sink_coefficient(rho);
    if (B[2] <= e_kin || K == 0.0) {  // sink inactive: T clamps to zero or mu = 0
      out[2] = B[2];
      return 0;
    }
    double lo = e_kin, hi = B[2];
    double E = B[2];
    const double tol = 1e-12 * (1.0 + std::abs(B[2]));
    int iter = 0;
    for (; iter < 50; ++iter) {
      const double T = fns.temperature(rho, mom, E);
      const double phi = E - B[2] + K * T * std::sqrt(T);
      if (std::abs(phi) <= tol) break;
      if (phi > 0.0) hi = E; else lo = E;
      const double dphi = 1.0 + K * std::sqrt(T) / rho;
      double next = E - phi / dphi;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - E) <= 1e-15 * (1.0 + std::abs(E))) { E = next; break; }
      E = next;
    }
    if (iter >= 50)
      throw numerical_failure("granular stage solve: Newton/bisection did not converge");
    out[2] = E;
    return iter;
  };
  md.velocity_components = {1};
  return md;
}

} // namespace relaxrk
