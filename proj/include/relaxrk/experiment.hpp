#pragma once

// Experiment engine behind the CLI: run a named problem to a final time and
// write CSV artifacts, measure self-convergence orders against a refined run,
// and compare stiff runs with their equilibrium-system counterparts.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "relaxrk/imex.hpp"
#include "relaxrk/initial_data.hpp"
#include "relaxrk/norms.hpp"

namespace relaxrk {

struct ExperimentSpec {
  std::string ic = "broadwell-smooth";
  std::string scheme = "ssp3-433";
  std::size_t n = 200;
  std::vector<std::size_t> n_list;  // convergence studies only; entries must double
  double cfl = 0.5;
  double epsilon = 1.0;
  double t_end = 0.5;
  int spatial_order = 5;
  Discretization disc = Discretization::FiniteDifference;
  std::string out_path;
  std::size_t error_component = 0;
  Norm norm = Norm::L1;
  bool project_output = false;
  InitialDataParams params;

  SolverConfig solver_config(const TestProblem& tp) const {
    SolverConfig cfg;
    cfg.scheme = scheme;
    cfg.epsilon = epsilon;
    cfg.cfl = cfl;
    cfg.t_end = t_end;
    cfg.spatial_order = spatial_order;
    cfg.disc = disc;
    cfg.bc = tp.bc;
    cfg.project_output = project_output;
    return cfg;
  }
};

// ---------------------------------------------------------------------------
// CSV artifacts: header x,comp_0,...,comp_{m-1}; 17 significant digits so
// values round-trip exactly; LF line endings; bytes are deterministic.

inline void write_solution_csv(std::ostream& os, const Grid1D& grid, const FieldArray& f) {
  os << "x";
  for (std::size_t k = 0; k < f.components(); ++k) os << ",comp_" << k;
  os << "\n";
  char buf[40];
  for (std::size_t j = 0; j < f.nodes(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", grid.x(j));
    os << buf;
    for (std::size_t k = 0; k < f.components(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", f(j, k));
      os << "," << buf;
    }
    os << "\n";
  }
}

struct CsvSolution {
  std::vector<double> x;
  FieldArray field;
};

inline CsvSolution read_solution_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw invalid_input("csv: empty file");
  std::size_t m = 0;
  for (char ch : line)
    if (ch == ',') ++m;
  if (m == 0) throw invalid_input("csv: malformed header");
  std::vector<double> xs;
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      const double v = std::strtod(cell.c_str(), nullptr);
      if (col == 0) xs.push_back(v); else vals.push_back(v);
      ++col;
    }
    if (col != m + 1) throw invalid_input("csv: ragged row");
  }
  CsvSolution out;
  out.x = std::move(xs);
  out.field = FieldArray(out.x.size(), m);
  for (std::size_t j = 0; j < out.x.size(); ++j)
    for (std::size_t k = 0; k < m; ++k) out.field(j, k) = vals[j * m + k];
  return out;
}

// ---------------------------------------------------------------------------

struct RunResult {
  TestProblem problem;
  Trajectory trajectory;
  double wall_seconds = 0.0;
};

inline RunResult run_single(const ExperimentSpec& spec, std::size_t n) {
  const auto t0 = std::chrono::steady_clock::now();
  TestProblem tp = initial_conditions(spec.ic, n, spec.params);
  const Model model = make_model(tp.model_name, spec.params);
  const Trajectory traj = integrate(model, spec.solver_config(tp), tp.state, tp.grid);
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(tp), traj, std::chrono::duration<double>(t1 - t0).count()};
}

// Writes the solution CSV plus a run manifest; on failure nothing is left
// behind and the error propagates to the caller.
inline RunResult run_experiment(const ExperimentSpec& spec) {
  RunResult res = run_single(spec, spec.n);
  if (!spec.out_path.empty()) {
    const std::filesystem::path csv_path(spec.out_path);
    try {
      {
        std::ofstream os(csv_path, std::ios::binary);
        if (!os) throw numerical_failure("cannot open output file " + spec.out_path);
        write_solution_csv(os, res.problem.grid, res.trajectory.final_state());
      }
      std::ofstream ms(csv_path.string() + ".manifest", std::ios::binary);
      ms << "ic = " << spec.ic << "\n"
         << "model = " << res.problem.model_name << "\n"
         << "scheme = " << spec.scheme << "\n"
         << "n = " << spec.n << "\n"
         << "cfl = " << spec.cfl << "\n"
         << "epsilon = " << spec.epsilon << "\n"
         << "t_end = " << spec.t_end << "\n"
         << "spatial_order = " << spec.spatial_order << "\n"
         << "discretization = "
         << (spec.disc == Discretization::FiniteDifference ? "fd" : "fv") << "\n"
         << "steps = " << res.trajectory.step_count << "\n"
         << "newton_stage_solves = " << res.trajectory.newton.stage_solves << "\n"
         << "newton_max_iterations = " << res.trajectory.newton.max_iterations << "\n"
         << "wall_seconds = " << res.wall_seconds << "\n";
    } catch (...) {
      std::error_code ec;
      std::filesystem::remove(csv_path, ec);
      std::filesystem::remove(csv_path.string() + ".manifest", ec);
      throw;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Convergence study

struct ErrorRow {
  std::size_t n;
  double error;
  double observed_order;  // NaN on the first row
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
  std::size_t reference_n = 0;
};

// Coarsen a periodic fine field one halving at a time.  Under cell-centered
// doubling the coarse node is the midpoint of its two children, so a plain
// child average carries an O(dx^2) bias that would mask the order of a
// third-order scheme; the symmetric 4-point midpoint rule is exact through
// cubic data and keeps the transfer error below every scheme error measured.
inline FieldArray restrict_half(const FieldArray& fine) {
  const std::size_t nf = fine.nodes();
  if (nf % 2 != 0) throw invalid_input("restrict_half: odd grid size");
  const std::size_t n = nf / 2;
  const std::size_t m = fine.components();
  FieldArray out(n, m);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t a = (2 * j + nf - 1) % nf;
    const std::size_t b = 2 * j;
    const std::size_t c = 2 * j + 1;
    const std::size_t d = (2 * j + 2) % nf;
    for (std::size_t k = 0; k < m; ++k)
      out(j, k) = (-fine(a, k) + 9.0 * fine(b, k) + 9.0 * fine(c, k) - fine(d, k)) / 16.0;
  }
  return out;
}

inline FieldArray restrict_to(const FieldArray& fine, std::size_t n) {
  if (n == 0 || fine.nodes() % n != 0 ||
      (fine.nodes() / n) & (fine.nodes() / n - 1))
    throw invalid_input("restrict_to: grids are not nested by doubling");
  FieldArray out = fine;
  while (out.nodes() > n) out = restrict_half(out);
  return out;
}

inline unsigned worker_threads(std::size_t jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("RELAXRK_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(hw, jobs));
}

// Self-convergence against a run at four times the finest requested grid,
// restricted by child averaging; the observed order is log2 of successive
// error ratios.
inline ErrorTable convergence_study(const ExperimentSpec& spec) {
  if (spec.n_list.size() < 2)
    throw invalid_input("convergence_study: need at least two grid sizes");
  for (std::size_t i = 1; i < spec.n_list.size(); ++i)
    if (spec.n_list[i] != 2 * spec.n_list[i - 1])
      throw invalid_input("convergence_study: grid list entries must double");
  if (!initial_conditions(spec.ic, spec.n_list[0], spec.params).bc.is_periodic())
    throw invalid_input("convergence_study: needs a smooth periodic problem");

  const std::size_t n_ref = 4 * spec.n_list.back();
  std::vector<std::size_t> all_n(spec.n_list);
  all_n.push_back(n_ref);

  std::vector<FieldArray> finals(all_n.size());
  std::vector<std::exception_ptr> errors(all_n.size());
  {
    const unsigned nthreads = worker_threads(all_n.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= all_n.size()) return;
        try {
          finals[i] = run_single(spec, all_n[i]).trajectory.final_state();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const FieldArray& reference = finals.back();
  ErrorTable table;
  table.reference_n = n_ref;
  for (std::size_t i = 0; i < spec.n_list.size(); ++i) {
    const FieldArray ref_coarse = restrict_to(reference, spec.n_list[i]);
    const double err = error_norm(finals[i], ref_coarse, spec.error_component, spec.norm);
    double order = std::numeric_limits<double>::quiet_NaN();
    if (i > 0 && err > 0.0 && table.rows.back().error > 0.0)
      order = std::log2(table.rows.back().error / err);
    table.rows.push_back({spec.n_list[i], err, order});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Asymptotic-preserving comparison: the full system at the configured epsilon
// against the explicit scheme on the equilibrium system, same grid and steps.

struct ApCompareReport {
  std::vector<double> conserved_l1;   // per conserved component
  double manifold_deviation = 0.0;    // max relative off-equilibrium distance
  bool in_stiff_regime = false;       // stage solves project strongly (mu >> 1)
  std::size_t steps_full = 0;
  std::size_t steps_limit = 0;
};

inline ApCompareReport ap_compare(const ExperimentSpec& spec) {
  TestProblem tp = initial_conditions(spec.ic, spec.n, spec.params);
  const Model model = make_model(tp.model_name, spec.params);
  if (!model.has_limit_system)
    throw invalid_input("ap_compare: model '" + model.name + "' has no limit system");

  const SolverConfig cfg = spec.solver_config(tp);
  const Trajectory full = integrate(model, cfg, tp.state, tp.grid);

  // project the initial data and rerun on the equilibrium system
  const std::size_t n = tp.grid.n;
  FieldArray u0(n, model.conserved);
  for (std::size_t j = 0; j < n; ++j) model.project(tp.state.state(j), u0.state(j));
  const Trajectory lim = equilibrium_integrate(model, cfg, u0, tp.grid);

  const FieldArray& uf = full.final_state();
  const FieldArray& ul = lim.final_state();
  FieldArray proj(n, model.conserved);
  for (std::size_t j = 0; j < n; ++j) model.project(uf.state(j), proj.state(j));

  ApCompareReport rep;
  rep.steps_full = static_cast<std::size_t>(full.step_count);
  rep.steps_limit = static_cast<std::size_t>(lim.step_count);
  for (std::size_t k = 0; k < model.conserved; ++k)
    rep.conserved_l1.push_back(error_norm(proj, ul, k, Norm::L1));

  // distance from the equilibrium manifold, relative to the state scale
  std::vector<double> eq(model.components), cons(model.conserved);
  double dev = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    auto s = uf.state(j);
    model.project(s, cons);
    model.equilibrium(cons, eq);
    for (std::size_t k = 0; k < model.components; ++k) {
      dev = std::max(dev, std::abs(s[k] - eq[k]));
      scale = std::max(scale, std::abs(s[k]));
    }
  }
  rep.manifold_deviation = scale > 0.0 ? dev / scale : dev;

  // the limit comparison is meaningful only when the implicit stages project
  // hard onto the manifold, i.e. mu = a_ii dt / epsilon is large
  const ImexTableau tab = builtin_scheme(spec.scheme);
  double a_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tab.stages(); ++i) {
    const double a = tab.implicit_part.coeff(i, i);
    if (a != 0.0) a_min = std::min(a_min, std::abs(a));
  }
  const double dt = spec.cfl * tp.grid.dx();
  rep.in_stiff_regime = a_min * dt / spec.epsilon >= 100.0;
  return rep;
}

} // namespace relaxrk
