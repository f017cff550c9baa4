#pragma once

// Butcher tableau pairs for implicit-explicit Runge-Kutta schemes: order
// verification, stability diagnostics, the built-in SSP/L-stable pairs, and
// conversion from the convex-combination (Shu-Osher) representation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "relaxrk/errors.hpp"

namespace relaxrk {

enum class TableauKind { Explicit, Dirk };

struct ButcherTableau {
  std::size_t nu = 0;           // stage count
  std::vector<double> a;        // nu x nu, row-major
  std::vector<double> w;        // weights, length nu
  std::vector<double> c;        // abscissae, length nu

  double coeff(std::size_t i, std::size_t j) const { return a[i * nu + j]; }
  double& coeff(std::size_t i, std::size_t j) { return a[i * nu + j]; }

  bool strictly_lower_triangular() const {
    for (std::size_t i = 0; i < nu; ++i)
      for (std::size_t j = i; j < nu; ++j)
        if (coeff(i, j) != 0.0) return false;
    return true;
  }
  bool lower_triangular() const {
    for (std::size_t i = 0; i < nu; ++i)
      for (std::size_t j = i + 1; j < nu; ++j)
        if (coeff(i, j) != 0.0) return false;
    return true;
  }
};

// Abscissae from the coefficient matrix: explicit stages sum the strictly
// lower part of each row, implicit (DIRK) stages include the diagonal.
inline std::vector<double> derive_c(const std::vector<double>& a, std::size_t nu,
                                    TableauKind kind) {
  if (a.size() != nu * nu) throw invalid_input("derive_c: matrix is not nu x nu");
  for (std::size_t i = 0; i < nu; ++i) {
    std::size_t first_zero = (kind == TableauKind::Explicit) ? i : i + 1;
    for (std::size_t j = first_zero; j < nu; ++j)
      if (a[i * nu + j] != 0.0)
        throw invalid_input("derive_c: matrix is not triangular for the requested kind");
  }
  std::vector<double> c(nu, 0.0);
  for (std::size_t i = 0; i < nu; ++i) {
    std::size_t last = (kind == TableauKind::Explicit) ? i : i + 1;
    double s = 0.0;
    for (std::size_t j = 0; j < last; ++j) s += a[i * nu + j];
    c[i] = s;
  }
  return c;
}

inline ButcherTableau make_tableau(std::vector<std::vector<double>> rows,
                                   std::vector<double> w, TableauKind kind) {
  const std::size_t nu = rows.size();
  if (nu == 0 || w.size() != nu) throw invalid_input("make_tableau: inconsistent sizes");
  ButcherTableau t;
  t.nu = nu;
  t.a.assign(nu * nu, 0.0);
  for (std::size_t i = 0; i < nu; ++i) {
    if (rows[i].size() != nu) throw invalid_input("make_tableau: row length != nu");
    for (std::size_t j = 0; j < nu; ++j) t.a[i * nu + j] = rows[i][j];
  }
  t.w = std::move(w);
  t.c = derive_c(t.a, nu, kind);
  return t;
}

struct ImexTableau {
  ButcherTableau explicit_part;  // strictly lower triangular
  ButcherTableau implicit_part;  // DIRK
  std::string name;
  int declared_order = 0;

  std::size_t stages() const { return explicit_part.nu; }
};

// ---------------------------------------------------------------------------
// Order conditions

struct ConditionEntry {
  std::string label;
  int order;
  double lhs;
  double target;
  double residual;  // |lhs - target|
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  int max_order_satisfied = 0;

  double worst_residual(int order) const {
    double r = 0.0;
    for (const auto& e : entries)
      if (e.order == order && e.residual > r) r = e.residual;
    return r;
  }
  bool satisfied_up_to(int order, double tol) const {
    for (const auto& e : entries)
      if (e.order <= order && e.residual > tol) return false;
    return true;
  }
};

inline constexpr double kConditionTolerance = 1e-13;

// All order conditions for the coupled pair through order p (p <= 3): the two
// single-scheme sets plus the mixed conditions that couple the tableaux.
inline ConditionReport verify_order(const ImexTableau& t, int p,
                                    double tol = kConditionTolerance) {
  if (p < 1 || p > 3)
    throw invalid_input("verify_order: only orders 1..3 are supported "
                        "(higher-order condition sets are not derived here)");
  if (t.explicit_part.nu != t.implicit_part.nu)
    throw invalid_input("verify_order: stage-count mismatch between tableaux");

  const std::size_t nu = t.stages();
  const auto& wt = t.explicit_part.w;
  const auto& w = t.implicit_part.w;
  const auto& ct = t.explicit_part.c;
  const auto& c = t.implicit_part.c;

  auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < nu; ++i) s += u[i] * v[i];
    return s;
  };
  auto matvec = [&](const ButcherTableau& m, const std::vector<double>& v) {
    std::vector<double> r(nu, 0.0);
    for (std::size_t i = 0; i < nu; ++i)
      for (std::size_t j = 0; j < nu; ++j) r[i] += m.coeff(i, j) * v[j];
    return r;
  };
  auto had = [&](const std::vector<double>& u, const std::vector<double>& v) {
    std::vector<double> r(nu);
    for (std::size_t i = 0; i < nu; ++i) r[i] = u[i] * v[i];
    return r;
  };

  ConditionReport rep;
  auto add = [&](std::string label, int order, double lhs, double target) {
    rep.entries.push_back({std::move(label), order, lhs, target, std::abs(lhs - target)});
  };

  std::vector<double> ones(nu, 1.0);
  add("sum(wt)", 1, dot(wt, ones), 1.0);
  add("sum(w)", 1, dot(w, ones), 1.0);

  if (p >= 2) {
    add("wt.ct", 2, dot(wt, ct), 0.5);
    add("w.c", 2, dot(w, c), 0.5);
    add("wt.c", 2, dot(wt, c), 0.5);       // coupling
    add("w.ct", 2, dot(w, ct), 0.5);       // coupling
  }
  if (p >= 3) {
    const auto& At = t.explicit_part;
    const auto& A = t.implicit_part;
    add("wt.At.ct", 3, dot(wt, matvec(At, ct)), 1.0 / 6.0);
    add("wt.ct.ct", 3, dot(wt, had(ct, ct)), 1.0 / 3.0);
    add("w.A.c", 3, dot(w, matvec(A, c)), 1.0 / 6.0);
    add("w.c.c", 3, dot(w, had(c, c)), 1.0 / 3.0);
    // coupling conditions
    add("wt.At.c", 3, dot(wt, matvec(At, c)), 1.0 / 6.0);
    add("wt.A.ct", 3, dot(wt, matvec(A, ct)), 1.0 / 6.0);
    add("wt.A.c", 3, dot(wt, matvec(A, c)), 1.0 / 6.0);
    add("w.At.c", 3, dot(w, matvec(At, c)), 1.0 / 6.0);
    add("w.A.ct", 3, dot(w, matvec(A, ct)), 1.0 / 6.0);
    add("w.At.ct", 3, dot(w, matvec(At, ct)), 1.0 / 6.0);
    add("wt.c.c", 3, dot(wt, had(c, c)), 1.0 / 3.0);
    add("wt.ct.c", 3, dot(wt, had(ct, c)), 1.0 / 3.0);
    add("w.ct.ct", 3, dot(w, had(ct, ct)), 1.0 / 3.0);
    add("w.ct.c", 3, dot(w, had(ct, c)), 1.0 / 3.0);
  }

  rep.max_order_satisfied = 0;
  for (int q = 1; q <= p; ++q) {
    if (!rep.satisfied_up_to(q, tol)) break;
    rep.max_order_satisfied = q;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Stability / asymptotic diagnostics

// Value of w^T A^{-1} e by forward substitution (A is triangular); equals the
// limit of the stability function at infinity shifted by one.  L-stability of
// the DIRK part holds when this equals 1.  nullopt when A is singular, which
// makes the criterion inapplicable rather than failed.
inline std::optional<double> stability_function_at_infinity(const ButcherTableau& t) {
  if (!t.lower_triangular())
    throw invalid_input("stability_function_at_infinity: tableau is not DIRK");
  for (std::size_t i = 0; i < t.nu; ++i)
    if (t.coeff(i, i) == 0.0) return std::nullopt;
  std::vector<double> x(t.nu, 0.0);
  for (std::size_t i = 0; i < t.nu; ++i) {
    double s = 1.0;
    for (std::size_t j = 0; j < i; ++j) s -= t.coeff(i, j) * x[j];
    x[i] = s / t.coeff(i, i);
  }
  double v = 0.0;
  for (std::size_t i = 0; i < t.nu; ++i) v += t.w[i] * x[i];
  return v;
}

// Last row of A equals the weight vector, coefficient for coefficient.
inline bool is_stiffly_accurate(const ButcherTableau& t) {
  for (std::size_t j = 0; j < t.nu; ++j)
    if (t.coeff(t.nu - 1, j) != t.w[j]) return false;
  return true;
}

enum class APClass {
  FullAP,               // every implicit diagonal entry nonzero
  APWellPreparedOnly,   // a_11 = c_1 = 0 but a_ii != 0 for i > 1
  NotAP,
};

inline const char* to_string(APClass c) {
  switch (c) {
    case APClass::FullAP: return "full-ap";
    case APClass::APWellPreparedOnly: return "ap-well-prepared-only";
    case APClass::NotAP: return "not-ap";
  }
  return "?";
}

inline APClass ap_classify(const ImexTableau& t) {
  const auto& A = t.implicit_part;
  bool tail_nonzero = true;
  for (std::size_t i = 1; i < A.nu; ++i)
    if (A.coeff(i, i) == 0.0) tail_nonzero = false;
  if (A.coeff(0, 0) != 0.0 && tail_nonzero) return APClass::FullAP;
  if (A.coeff(0, 0) == 0.0 && A.c[0] == 0.0 && tail_nonzero && A.nu > 1)
    return APClass::APWellPreparedOnly;
  return APClass::NotAP;
}

// ---------------------------------------------------------------------------
// Built-in schemes

inline const std::vector<std::string>& builtin_scheme_names() {
  static const std::vector<std::string> names = {
      "ssp2-222", "ssp2-322", "ssp2-332", "ssp3-332", "ssp3-433"};
  return names;
}

// Coefficient pairs for the five IMEX-SSP schemes.  The irrational entries are
// stored at full double precision: gamma = 1 - 1/sqrt(2), and for ssp3-433
// alpha is the smaller root of 3x^2 - 9x + 2 with beta = alpha/4 and
// eta = (1 - 2 alpha)/4, which match the usual 14-digit printed values.
inline ImexTableau builtin_scheme(const std::string& name) {
  const double g = 1.0 - 1.0 / std::sqrt(2.0);
  ImexTableau t;
  t.name = name;
  if (name == "ssp2-222") {
    t.declared_order = 2;
    t.explicit_part = make_tableau({{0, 0}, {1, 0}}, {0.5, 0.5}, TableauKind::Explicit);
    t.implicit_part =
        make_tableau({{g, 0}, {1 - 2 * g, g}}, {0.5, 0.5}, TableauKind::Dirk);
  } else if (name == "ssp2-322") {
    t.declared_order = 2;
    t.explicit_part = make_tableau({{0, 0, 0}, {0, 0, 0}, {0, 1, 0}},
                                   {0.0, 0.5, 0.5}, TableauKind::Explicit);
    t.implicit_part = make_tableau({{0.5, 0, 0}, {-0.5, 0.5, 0}, {0, 0.5, 0.5}},
                                   {0.0, 0.5, 0.5}, TableauKind::Dirk);
  } else if (name == "ssp2-332") {
    t.declared_order = 2;
    const double th = 1.0 / 3.0;
    t.explicit_part = make_tableau({{0, 0, 0}, {0.5, 0, 0}, {0.5, 0.5, 0}},
                                   {th, th, th}, TableauKind::Explicit);
    t.implicit_part = make_tableau({{0.25, 0, 0}, {0, 0.25, 0}, {th, th, th}},
                                   {th, th, th}, TableauKind::Dirk);
  } else if (name == "ssp3-332") {
    t.declared_order = 2;
    t.explicit_part = make_tableau({{0, 0, 0}, {1, 0, 0}, {0.25, 0.25, 0}},
                                   {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, TableauKind::Explicit);
    t.implicit_part =
        make_tableau({{g, 0, 0}, {1 - 2 * g, g, 0}, {0.5 - g, 0, g}},
                     {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, TableauKind::Dirk);
  } else if (name == "ssp3-433") {
    t.declared_order = 3;
    const double al = (9.0 - std::sqrt(57.0)) / 6.0;
    const double be = al / 4.0;
    const double eta = (1.0 - 2.0 * al) / 4.0;
    t.explicit_part = make_tableau(
        {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0.25, 0.25, 0}},
        {0.0, 1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, TableauKind::Explicit);
    t.implicit_part = make_tableau(
        {{al, 0, 0, 0},
         {-al, al, 0, 0},
         {0, 1 - al, al, 0},
         {be, eta, 0.5 - be - eta - al, al}},
        {0.0, 1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, TableauKind::Dirk);
  } else {
    std::string msg = "unknown scheme '" + name + "'; valid names:";
    for (const auto& n : builtin_scheme_names()) msg += " " + n;
    throw invalid_input(msg);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Shu-Osher (convex combination of forward Euler steps) representation

struct ShuOsherForm {
  std::size_t nu = 0;
  // alpha[i][k], beta[i][k] for stage i = 1..nu (index i-1), k = 0..i-1
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<double>> beta;
};

struct ShuOsherConversion {
  ButcherTableau tableau;
  double ssp_coefficient;  // min over beta_ik > 0 of alpha_ik / beta_ik
};

inline ShuOsherConversion shu_osher_convert(const ShuOsherForm& s) {
  const std::size_t nu = s.nu;
  if (s.alpha.size() != nu || s.beta.size() != nu)
    throw invalid_input("shu_osher_convert: ragged coefficient arrays");
  for (std::size_t i = 0; i < nu; ++i) {
    if (s.alpha[i].size() != i + 1 || s.beta[i].size() != i + 1)
      throw invalid_input("shu_osher_convert: row " + std::to_string(i + 1) +
                          " must have " + std::to_string(i + 1) + " entries");
    double row_sum = 0.0;
    for (std::size_t k = 0; k <= i; ++k) {
      const double a = s.alpha[i][k];
      if (a < 0.0) throw invalid_input("shu_osher_convert: negative alpha coefficient");
      if (a == 0.0 && s.beta[i][k] != 0.0)
        throw invalid_input("shu_osher_convert: alpha = 0 with beta != 0");
      row_sum += a;
    }
    if (std::abs(row_sum - 1.0) > 1e-12)
      throw invalid_input("shu_osher_convert: alpha row sums must equal 1");
  }

  // Accumulate U^(i) = U^n + dt sum_j theta[i][j] L(U^(j)) through the
  // convex-combination recursion; theta rows i = 1..nu give the Butcher rows
  // and the last row gives the weights.
  std::vector<std::vector<double>> theta(nu + 1);
  theta[0] = {};
  for (std::size_t i = 1; i <= nu; ++i) {
    theta[i].assign(i, 0.0);
    for (std::size_t k = 0; k < i; ++k) {
      theta[i][k] += s.beta[i - 1][k];
      if (k >= 1)
        for (std::size_t j = 0; j < k; ++j)
          theta[i][j] += s.alpha[i - 1][k] * theta[k][j];
    }
  }

  ButcherTableau b;
  b.nu = nu;
  b.a.assign(nu * nu, 0.0);
  for (std::size_t i = 1; i < nu; ++i)
    for (std::size_t j = 0; j < i; ++j) b.a[i * nu + j] = theta[i][j];
  b.w.assign(nu, 0.0);
  for (std::size_t j = 0; j < nu; ++j) b.w[j] = theta[nu][j];
  b.c = derive_c(b.a, nu, TableauKind::Explicit);

  double ssp = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nu; ++i)
    for (std::size_t k = 0; k <= i; ++k)
      if (s.beta[i][k] > 0.0) ssp = std::min(ssp, s.alpha[i][k] / s.beta[i][k]);
  return {std::move(b), ssp};
}

} // namespace relaxrk
