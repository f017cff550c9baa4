// relaxrk command-line front end: run the test problems, measure convergence
// orders, compare stiff runs against their equilibrium limits, and inspect
// IMEX tableaux.  Exit codes: 0 success, 1 numerical failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaxrk/relaxrk.hpp"

namespace {

using namespace relaxrk;

struct CommonOptions {
  std::string model;
  std::string ic = "broadwell-smooth";
  std::string scheme = "ssp3-433";
  std::size_t n = 200;
  double cfl = 0.5;
  double eps = 1.0;
  double tend = 0.5;
  int order = 5;
  std::string disc = "fd";
  std::size_t component = 0;
  std::string norm = "l1";
  double az = 1.0;
  double g_grav = 1.0;
  double e_rest = 0.97;
  double sigma = 0.1;
  bool project_output = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_n) {
  cmd->add_option("--model", o.model, "model name (defaults to the one implied by --ic)");
  cmd->add_option("--ic", o.ic, "initial condition name");
  cmd->add_option("--scheme", o.scheme, "IMEX scheme name");
  if (with_n) cmd->add_option("--n", o.n, "grid cells");
  cmd->add_option("--cfl", o.cfl, "Courant number dt/dx");
  cmd->add_option("--eps", o.eps, "relaxation parameter");
  cmd->add_option("--tend", o.tend, "final time");
  cmd->add_option("--order", o.order, "spatial order 1|2|5")
      ->check(CLI::IsMember({1, 2, 5}));
  cmd->add_option("--disc", o.disc, "spatial discretization")
      ->check(CLI::IsMember({"fd", "fv"}));
  cmd->add_option("--component", o.component, "error/report component index");
  cmd->add_option("--norm", o.norm, "error norm")->check(CLI::IsMember({"l1", "linf"}));
  cmd->add_option("--az", o.az, "broadwell-smooth equilibrium factor a_z");
  cmd->add_option("--g", o.g_grav, "granular gravitational acceleration");
  cmd->add_option("--e-rest", o.e_rest, "granular restitution coefficient");
  cmd->add_option("--sigma", o.sigma, "granular particle diameter");
  cmd->add_flag("--project-output", o.project_output,
                "re-project emitted snapshots onto the equilibrium manifold");
  cmd->set_config("--config", "", "key = value configuration file");
}

ExperimentSpec to_spec(const CommonOptions& o) {
  ExperimentSpec spec;
  spec.ic = o.ic;
  spec.scheme = o.scheme;
  spec.n = o.n;
  spec.cfl = o.cfl;
  spec.epsilon = o.eps;
  spec.t_end = o.tend;
  spec.spatial_order = o.order;
  spec.disc = o.disc == "fv" ? Discretization::FiniteVolume : Discretization::FiniteDifference;
  spec.error_component = o.component;
  spec.norm = o.norm == "linf" ? Norm::LInf : Norm::L1;
  spec.params.a_z = o.az;
  spec.params.granular.g_grav = o.g_grav;
  spec.params.granular.e_rest = o.e_rest;
  spec.params.granular.sigma = o.sigma;
  spec.project_output = o.project_output;
  return spec;
}

// vocabulary checks up front so bad names are usage errors, not solver throws
int validate_vocabulary(const CommonOptions& o) {
  const auto& schemes = builtin_scheme_names();
  if (std::find(schemes.begin(), schemes.end(), o.scheme) == schemes.end()) {
    std::cerr << "error: unknown scheme '" << o.scheme << "'; valid schemes:";
    for (const auto& s : schemes) std::cerr << " " << s;
    std::cerr << "\n";
    return 2;
  }
  const auto& ics = initial_condition_names();
  if (std::find(ics.begin(), ics.end(), o.ic) == ics.end()) {
    std::cerr << "error: unknown initial condition '" << o.ic << "'; valid names:";
    for (const auto& s : ics) std::cerr << " " << s;
    std::cerr << "\n";
    return 2;
  }
  if (!o.model.empty()) {
    TestProblem tp = initial_conditions(o.ic, 8, {});
    if (tp.model_name != o.model) {
      std::cerr << "error: --model " << o.model << " does not match --ic " << o.ic
                << " (which belongs to " << tp.model_name << ")\n";
      return 2;
    }
  }
  return 0;
}

int cmd_solve(const CommonOptions& o, const std::string& out) {
  if (int rc = validate_vocabulary(o)) return rc;
  ExperimentSpec spec = to_spec(o);
  spec.out_path = out;
  RunResult res = run_experiment(spec);
  std::printf("wrote %s (%zu nodes, %lld steps, %.3fs)\n", out.c_str(),
              res.problem.grid.n, res.trajectory.step_count, res.wall_seconds);
  return 0;
}

int cmd_converge(const CommonOptions& o, std::vector<std::size_t> n_list,
                 const std::string& out) {
  if (int rc = validate_vocabulary(o)) return rc;
  ExperimentSpec spec = to_spec(o);
  spec.n_list = std::move(n_list);
  ErrorTable table = convergence_study(spec);
  std::string text = "n,error,observed_order\n";
  for (const auto& row : table.rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.4f\n", row.n, row.error, row.observed_order);
    text += buf;
  }
  std::printf("reference n = %zu\n%s", table.reference_n, text.c_str());
  if (!out.empty()) {
    std::ofstream os(out, std::ios::binary);
    os << text;
  }
  return 0;
}

int cmd_ap_compare(const CommonOptions& o) {
  if (int rc = validate_vocabulary(o)) return rc;
  ApCompareReport rep = ap_compare(to_spec(o));
  for (std::size_t k = 0; k < rep.conserved_l1.size(); ++k)
    std::printf("conserved component %zu: relative L1 distance %.6e\n", k,
                rep.conserved_l1[k]);
  std::printf("manifold deviation: %.6e\n", rep.manifold_deviation);
  std::printf("stiff regime: %s\n",
              rep.in_stiff_regime ? "yes" : "no (limit comparison not meaningful)");
  return 0;
}

int cmd_tableau_list() {
  for (const auto& name : builtin_scheme_names()) {
    const ImexTableau t = builtin_scheme(name);
    const auto rinf = stability_function_at_infinity(t.implicit_part);
    std::printf("%-10s stages=%zu order=%d ap=%s stiffly_accurate=%s wAinve=%s\n",
                name.c_str(), t.stages(), t.declared_order, to_string(ap_classify(t)),
                is_stiffly_accurate(t.implicit_part) ? "yes" : "no",
                rinf ? std::to_string(*rinf).c_str() : "n/a");
  }
  return 0;
}

int cmd_tableau_verify(const std::string& target, int order) {
  ImexTableau t;
  const auto& names = builtin_scheme_names();
  if (std::find(names.begin(), names.end(), target) != names.end()) {
    t = builtin_scheme(target);
  } else if (std::filesystem::exists(target)) {
    std::ifstream is(target);
    t = parse_imex_tableau(is, std::filesystem::path(target).stem().string(), order);
  } else {
    std::cerr << "error: '" << target << "' is neither a builtin scheme nor a file; "
              << "builtin schemes:";
    for (const auto& s : names) std::cerr << " " << s;
    std::cerr << "\n";
    return 2;
  }
  const ConditionReport rep = verify_order(t, order);
  for (const auto& e : rep.entries)
    std::printf("order %d  %-10s lhs=% .15f target=% .15f residual=%.3e\n", e.order,
                e.label.c_str(), e.lhs, e.target, e.residual);
  std::printf("max order satisfied: %d (requested %d)\n", rep.max_order_satisfied, order);
  return rep.max_order_satisfied >= order ? 0 : 1;
}

int cmd_tableau_count(int order, const std::string& reduction) {
  CouplingReduction red;
  if (reduction == "general") red = CouplingReduction::General;
  else if (reduction == "w") red = CouplingReduction::WeightsEqual;
  else if (reduction == "c") red = CouplingReduction::AbscissaeEqual;
  else red = CouplingReduction::Both;
  std::printf("%llu\n",
              static_cast<unsigned long long>(count_coupling_conditions(order, red)));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMEX Runge-Kutta solver for 1-D hyperbolic systems with stiff relaxation"};
  app.require_subcommand(1);

  CommonOptions solve_opts, conv_opts, ap_opts;
  std::string solve_out = "solution.csv", conv_out;
  std::vector<std::size_t> n_list;

  CLI::App* solve = app.add_subcommand("solve", "integrate a test problem and write CSV");
  add_common(solve, solve_opts, true);
  solve->add_option("--out", solve_out, "output CSV path");

  CLI::App* conv = app.add_subcommand("converge", "self-convergence study over nested grids");
  add_common(conv, conv_opts, false);
  conv->add_option("--n-list", n_list, "comma-separated doubling grid sizes")
      ->required()->delimiter(',');
  conv->add_option("--out", conv_out, "optional CSV path for the error table");

  CLI::App* apc = app.add_subcommand("ap-compare",
                                     "compare a stiff run with the equilibrium system");
  add_common(apc, ap_opts, true);

  CLI::App* tab = app.add_subcommand("tableau", "inspect IMEX tableaux");
  tab->require_subcommand(1);
  tab->add_subcommand("list", "list builtin schemes and their properties");
  std::string verify_target = "ssp3-433";
  int verify_order_p = 2;
  CLI::App* tv = tab->add_subcommand("verify", "check order conditions");
  tv->add_option("target", verify_target, "builtin scheme name or tableau file")->required();
  tv->add_option("--order", verify_order_p, "order to verify (1..3)")->required()
      ->check(CLI::Range(1, 3));
  int count_order = 3;
  std::string count_reduction = "general";
  CLI::App* tc = tab->add_subcommand("count-coupling", "count coupling conditions");
  tc->add_option("--order", count_order, "cumulative through this order (1..6)")
      ->required()->check(CLI::Range(1, 6));
  tc->add_option("--reduction", count_reduction, "coefficient identification")
      ->check(CLI::IsMember({"general", "w", "c", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_opts, solve_out);
    if (conv->parsed()) return cmd_converge(conv_opts, n_list, conv_out);
    if (apc->parsed()) return cmd_ap_compare(ap_opts);
    if (tab->parsed()) {
      if (tab->get_subcommand("list")->parsed()) return cmd_tableau_list();
      if (tv->parsed()) return cmd_tableau_verify(verify_target, verify_order_p);
      if (tc->parsed()) return cmd_tableau_count(count_order, count_reduction);
    }
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_failure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
