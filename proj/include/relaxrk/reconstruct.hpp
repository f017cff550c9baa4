#pragma once

// Interface-value reconstruction kernels: minmod-limited linear slopes and
// fifth-order WENO, plus the local Lax-Friedrichs (Rusanov) flux splitting.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "relaxrk/errors.hpp"

namespace relaxrk {

inline double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return a < b ? a : b;
  if (a < 0.0 && b < 0.0) return a > b ? a : b;
  return 0.0;
}

enum class Bias { Left, Right };

namespace detail {

// classical smoothness indicators, optimal weights 1/10, 3/5, 3/10, and the
// usual 1e-6 regularization added to the indicators
inline constexpr double kWenoEps = 1e-6;

inline double weno5_right_face(double qm2, double qm1, double q0, double qp1, double qp2) {
  const double b0 = (13.0 / 12.0) * (q0 - 2.0 * qp1 + qp2) * (q0 - 2.0 * qp1 + qp2) +
                    0.25 * (3.0 * q0 - 4.0 * qp1 + qp2) * (3.0 * q0 - 4.0 * qp1 + qp2);
  const double b1 = (13.0 / 12.0) * (qm1 - 2.0 * q0 + qp1) * (qm1 - 2.0 * q0 + qp1) +
                    0.25 * (qm1 - qp1) * (qm1 - qp1);
  const double b2 = (13.0 / 12.0) * (qm2 - 2.0 * qm1 + q0) * (qm2 - 2.0 * qm1 + q0) +
                    0.25 * (qm2 - 4.0 * qm1 + 3.0 * q0) * (qm2 - 4.0 * qm1 + 3.0 * q0);
  const double a0 = 0.3 / ((kWenoEps + b0) * (kWenoEps + b0));
  const double a1 = 0.6 / ((kWenoEps + b1) * (kWenoEps + b1));
  const double a2 = 0.1 / ((kWenoEps + b2) * (kWenoEps + b2));
  const double p0 = (2.0 * q0 + 5.0 * qp1 - qp2) / 6.0;
  const double p1 = (-qm1 + 5.0 * q0 + 2.0 * qp1) / 6.0;
  const double p2 = (2.0 * qm2 - 7.0 * qm1 + 11.0 * q0) / 6.0;
  return (a0 * p0 + a1 * p1 + a2 * p2) / (a0 + a1 + a2);
}

} // namespace detail

// Fifth-order WENO point value from five consecutive cell values.  Bias::Left
// reconstructs at the right face of the center cell; Bias::Right reconstructs
// at the center cell's left face (the mirrored stencil).
inline double weno5_reconstruct(std::span<const double, 5> window, Bias bias) {
  if (bias == Bias::Left)
    return detail::weno5_right_face(window[0], window[1], window[2], window[3], window[4]);
  return detail::weno5_right_face(window[4], window[3], window[2], window[1], window[0]);
}

// f = f+ + f- with df+/du >= 0 and df-/du <= 0 whenever alpha bounds the
// characteristic speeds over the data.
inline std::pair<double, double> llf_split(double f, double u, double alpha) {
  if (alpha < 0.0) throw invalid_input("llf_split: negative dissipation speed");
  return {0.5 * (f + alpha * u), 0.5 * (f - alpha * u)};
}

inline std::pair<std::vector<double>, std::vector<double>>
llf_split(std::span<const double> f_vals, std::span<const double> u_vals, double alpha) {
  if (alpha < 0.0) throw invalid_input("llf_split: negative dissipation speed");
  if (f_vals.size() != u_vals.size()) throw invalid_input("llf_split: size mismatch");
  std::vector<double> fp(f_vals.size()), fm(f_vals.size());
  for (std::size_t i = 0; i < f_vals.size(); ++i) {
    fp[i] = 0.5 * (f_vals[i] + alpha * u_vals[i]);
    fm[i] = 0.5 * (f_vals[i] - alpha * u_vals[i]);
  }
  return {std::move(fp), std::move(fm)};
}

} // namespace relaxrk
