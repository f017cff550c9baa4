#pragma once

// A relaxation system: flux F, stiff source R with Q R = 0, the conserved
// projection u = Q U, the equilibrium map E(u) with R(E(u)) = 0, the limit
// flux G(u) = Q F(E(u)), wave-speed bounds for both systems, and the per-node
// implicit stage solver for U = B + mu R(U).

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "relaxrk/errors.hpp"

namespace relaxrk {

using StateFn = std::function<void(std::span<const double>, std::span<double>)>;
using SpeedFn = std::function<double(std::span<const double>)>;
// returns the iteration count used (0 for closed forms)
using StageSolveFn = std::function<int(std::span<const double>, double, std::span<double>)>;

struct Model {
  std::string name;
  std::size_t components = 0;  // N
  std::size_t conserved = 0;   // n < N

  StateFn flux;             // N -> N
  StateFn relax;            // N -> N, without the 1/epsilon factor
  StateFn project;          // N -> n
  StateFn equilibrium;      // n -> N
  StateFn limit_flux;       // n -> n, empty when has_limit_system is false
  SpeedFn wave_speed_bound;        // over a full state
  SpeedFn limit_wave_speed_bound;  // over a conserved state
  StageSolveFn stage_solve;        // solves U = B + mu R(U)
  StateFn explicit_source;  // non-stiff forcing; empty means zero
  std::vector<int> velocity_components;  // sign-flipped at reflective walls
  bool has_limit_system = true;

  bool has_explicit_source() const { return static_cast<bool>(explicit_source); }
};

// ---------------------------------------------------------------------------
// Generic damped-Newton stage solver with a finite-difference Jacobian.
// Converges when the residual max-norm drops below 1e-12 (1 + |B|_inf); the
// initial guess is the equilibrium projection of B when the stage is strongly
// relaxed, otherwise B itself.

struct NewtonOptions {
  int max_iterations = 50;
  double tolerance_scale = 1e-12;
  // optional analytic Jacobian of R; when empty, forward differences are used
  std::function<void(std::span<const double>, std::span<double>)> relax_jacobian;
};

inline int generic_newton_stage_solve(const Model& model, std::span<const double> B,
                                      double mu, std::span<double> out,
                                      const NewtonOptions& opts = {}) {
  const std::size_t N = model.components;
  if (B.size() != N || out.size() != N)
    throw invalid_input("generic_newton_stage_solve: state size mismatch");
  if (mu < 0.0) throw invalid_input("generic_newton_stage_solve: negative mu");

  double bnorm = 0.0;
  for (double v : B) bnorm = std::max(bnorm, std::abs(v));
  const double tol = opts.tolerance_scale * (1.0 + bnorm);

  std::vector<double> U(B.begin(), B.end());
  std::vector<double> R(N), Rp(N), res(N), step(N), trial(N), trial_res(N);
  std::vector<double> jac(N * N);

  auto residual = [&](std::span<const double> u, std::span<double> r) {
    model.relax(u, R);
    for (std::size_t k = 0; k < N; ++k) r[k] = u[k] - B[k] - mu * R[k];
  };
  auto maxnorm = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
  };

  // strongly relaxed stage: start from the local equilibrium of B
  model.relax(B, R);
  const double relax_scale = maxnorm(R) / (1.0 + bnorm);
  if (mu * relax_scale > 1.0 && model.equilibrium && model.project) {
    std::vector<double> u_cons(model.conserved);
    model.project(B, u_cons);
    model.equilibrium(u_cons, U);
  }

  residual(U, res);
  double rnorm = maxnorm(res);
  int iter = 0;
  while (rnorm > tol) {
    if (iter >= opts.max_iterations)
      throw numerical_failure("generic_newton_stage_solve: no convergence after " +
                              std::to_string(opts.max_iterations) +
                              " iterations, residual " + std::to_string(rnorm));
    // J = I - mu dR/dU
    if (opts.relax_jacobian) {
      opts.relax_jacobian(U, jac);
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
          jac[i * N + j] = (i == j ? 1.0 : 0.0) - mu * jac[i * N + j];
    } else {
      model.relax(U, R);
      std::vector<double> Ushift(U);
      for (std::size_t j = 0; j < N; ++j) {
        const double h = 1e-7 * (1.0 + std::abs(U[j]));
        Ushift[j] = U[j] + h;
        model.relax(Ushift, Rp);
        Ushift[j] = U[j];
        for (std::size_t i = 0; i < N; ++i)
          jac[i * N + j] = (i == j ? 1.0 : 0.0) - mu * (Rp[i] - R[i]) / h;
      }
    }
    // solve J step = -res by Gaussian elimination with partial pivoting
    {
      std::vector<double> M(jac);
      for (std::size_t k = 0; k < N; ++k) step[k] = -res[k];
      for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
          if (std::abs(M[r * N + col]) > std::abs(M[piv * N + col])) piv = r;
        if (M[piv * N + col] == 0.0)
          throw numerical_failure("generic_newton_stage_solve: singular Jacobian");
        if (piv != col) {
          for (std::size_t j2 = 0; j2 < N; ++j2) std::swap(M[col * N + j2], M[piv * N + j2]);
          std::swap(step[col], step[piv]);
        }
        for (std::size_t r = col + 1; r < N; ++r) {
          const double f = M[r * N + col] / M[col * N + col];
          for (std::size_t j2 = col; j2 < N; ++j2) M[r * N + j2] -= f * M[col * N + j2];
          step[r] -= f * step[col];
        }
      }
      for (std::size_t col = N; col-- > 0;) {
        double s = step[col];
        for (std::size_t j2 = col + 1; j2 < N; ++j2) s -= M[col * N + j2] * step[j2];
        step[col] = s / M[col * N + col];
      }
    }
    // For mu >> 1/eps the floating-point noise of mu R(U) exceeds the
    // residual tolerance, so a full Newton step at the noise floor also
    // counts as converged: the iterate cannot be improved in this arithmetic.
    double unorm = 0.0;
    for (double v : U) unorm = std::max(unorm, std::abs(v));
    if (maxnorm(step) <= opts.tolerance_scale * (1.0 + unorm)) {
      for (std::size_t k = 0; k < N; ++k) U[k] += step[k];
      ++iter;
      break;
    }
    // damping: halve until the residual norm improves
    double lambda = 1.0;
    for (int halvings = 0;; ++halvings) {
      for (std::size_t k = 0; k < N; ++k) trial[k] = U[k] + lambda * step[k];
      residual(trial, trial_res);
      const double tnorm = maxnorm(trial_res);
      if (tnorm < rnorm || tnorm <= tol) {
        U = trial;
        res = trial_res;
        rnorm = tnorm;
        break;
      }
      if (halvings >= 40)
        throw numerical_failure("generic_newton_stage_solve: line search stalled");
      lambda *= 0.5;
    }
    ++iter;
  }
  for (std::size_t k = 0; k < N; ++k) out[k] = U[k];
  return iter;
}

} // namespace relaxrk
