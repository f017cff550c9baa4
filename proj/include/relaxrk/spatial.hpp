#pragma once

// Conservative spatial discretization of the convective term -d/dx F(U):
// finite-difference flux reconstruction (orders 1, 2, 5) with local
// Lax-Friedrichs flux splitting, and a finite-volume alternative (orders 1, 2)
// with an interface LLF numerical flux.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "relaxrk/boundary.hpp"
#include "relaxrk/grid.hpp"
#include "relaxrk/model.hpp"
#include "relaxrk/reconstruct.hpp"

namespace relaxrk {

enum class Discretization { FiniteDifference, FiniteVolume };

inline std::size_t ghost_depth(int order) {
  switch (order) {
    case 1: return 1;
    case 2: return 2;  // minmod slope in the first ghost cell needs a second
    case 5: return 3;
    default: throw invalid_input("ghost_depth: spatial order must be 1, 2 or 5");
  }
}

namespace detail {

// global dissipation speed: wave-speed bound maximized over the extended data,
// accumulated in index order so results do not depend on evaluation order
inline double max_wave_speed(const Model& model, const FieldArray& ext) {
  double a = 0.0;
  for (std::size_t j = 0; j < ext.nodes(); ++j)
    a = std::max(a, model.wave_speed_bound(ext.state(j)));
  return a;
}

} // namespace detail

// Finite-difference convective term: reconstruct split point fluxes to faces,
// difference them back.  Returns -(Fhat_{j+1/2} - Fhat_{j-1/2}) / dx per node.
inline FieldArray convective_rhs(const Model& model, const FieldArray& f,
                                 const Grid1D& grid, const BoundaryCondition& bc,
                                 int order) {
  if (order != 1 && order != 2 && order != 5)
    throw invalid_input("convective_rhs: spatial order must be 1, 2 or 5");
  const std::size_t n = f.nodes();
  const std::size_t m = f.components();
  const std::size_t d = ghost_depth(order);
  if (n < d) throw invalid_input("convective_rhs: grid smaller than stencil");

  const FieldArray ext = ghost_fill(f, bc, d, model.velocity_components);
  const std::size_t ne = ext.nodes();
  const double alpha = detail::max_wave_speed(model, ext);

  // split point fluxes over the extended range
  std::vector<double> fp(ne * m), fm(ne * m), fx(m);
  for (std::size_t j = 0; j < ne; ++j) {
    auto u = ext.state(j);
    model.flux(u, fx);
    for (std::size_t k = 0; k < m; ++k) {
      fp[j * m + k] = 0.5 * (fx[k] + alpha * u[k]);
      fm[j * m + k] = 0.5 * (fx[k] - alpha * u[k]);
    }
  }

  // n+1 faces; face j sits between interior cells j-1 and j
  std::vector<double> fhat((n + 1) * m);
  for (std::size_t face = 0; face <= n; ++face) {
    const std::size_t jl = face + d - 1;  // extended index of the left cell
    const std::size_t jr = face + d;
    for (std::size_t k = 0; k < m; ++k) {
      double plus, minus;
      if (order == 1) {
        plus = fp[jl * m + k];
        minus = fm[jr * m + k];
      } else if (order == 2) {
        const double sp = minmod(fp[jl * m + k] - fp[(jl - 1) * m + k],
                                 fp[(jl + 1) * m + k] - fp[jl * m + k]);
        const double sm = minmod(fm[jr * m + k] - fm[(jr - 1) * m + k],
                                 fm[(jr + 1) * m + k] - fm[jr * m + k]);
        plus = fp[jl * m + k] + 0.5 * sp;
        minus = fm[jr * m + k] - 0.5 * sm;
      } else {
        const double wp[5] = {fp[(jl - 2) * m + k], fp[(jl - 1) * m + k], fp[jl * m + k],
                              fp[(jl + 1) * m + k], fp[(jl + 2) * m + k]};
        const double wm[5] = {fm[(jr - 2) * m + k], fm[(jr - 1) * m + k], fm[jr * m + k],
                              fm[(jr + 1) * m + k], fm[(jr + 2) * m + k]};
        plus = weno5_reconstruct(std::span<const double, 5>(wp, 5), Bias::Left);
        minus = weno5_reconstruct(std::span<const double, 5>(wm, 5), Bias::Right);
      }
      fhat[face * m + k] = plus + minus;
    }
  }

  FieldArray rhs(n, m);
  const double inv_dx = 1.0 / grid.dx();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < m; ++k)
      rhs(j, k) = -(fhat[(j + 1) * m + k] - fhat[j * m + k]) * inv_dx;
  return rhs;
}

// Finite-volume convective term on cell averages with the LLF interface flux;
// order 2 uses minmod-limited piecewise-linear reconstruction of the states.
inline FieldArray fv_rhs(const Model& model, const FieldArray& f, const Grid1D& grid,
                         const BoundaryCondition& bc, int order) {
  if (order != 1 && order != 2)
    throw invalid_input("fv_rhs: only orders 1 and 2 are supported");
  const std::size_t n = f.nodes();
  const std::size_t m = f.components();
  const std::size_t d = ghost_depth(order);
  if (n < d) throw invalid_input("fv_rhs: grid smaller than stencil");

  const FieldArray ext = ghost_fill(f, bc, d, model.velocity_components);
  const double alpha = detail::max_wave_speed(model, ext);

  std::vector<double> fhat((n + 1) * m);
  std::vector<double> ul(m), ur(m), fl(m), fr(m);
  for (std::size_t face = 0; face <= n; ++face) {
    const std::size_t jl = face + d - 1;
    const std::size_t jr = face + d;
    if (order == 1) {
      std::copy_n(ext.state(jl).data(), m, ul.data());
      std::copy_n(ext.state(jr).data(), m, ur.data());
    } else {
      for (std::size_t k = 0; k < m; ++k) {
        const double sl = minmod(ext(jl, k) - ext(jl - 1, k), ext(jl + 1, k) - ext(jl, k));
        const double sr = minmod(ext(jr, k) - ext(jr - 1, k), ext(jr + 1, k) - ext(jr, k));
        ul[k] = ext(jl, k) + 0.5 * sl;
        ur[k] = ext(jr, k) - 0.5 * sr;
      }
    }
    model.flux(ul, fl);
    model.flux(ur, fr);
    for (std::size_t k = 0; k < m; ++k)
      fhat[face * m + k] = 0.5 * (fl[k] + fr[k] - alpha * (ur[k] - ul[k]));
  }

  FieldArray rhs(n, m);
  const double inv_dx = 1.0 / grid.dx();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < m; ++k)
      rhs(j, k) = -(fhat[(j + 1) * m + k] - fhat[j * m + k]) * inv_dx;
  return rhs;
}

inline FieldArray convective_term(const Model& model, const FieldArray& f,
                                  const Grid1D& grid, const BoundaryCondition& bc,
                                  Discretization disc, int order) {
  return disc == Discretization::FiniteDifference
             ? convective_rhs(model, f, grid, bc, order)
             : fv_rhs(model, f, grid, bc, order);
}

} // namespace relaxrk
