// qbplan: generate, inspect, execute, and simulate sequential-observation
// plans for the Gaussian two-decision problem with credal priors.
//
// Exit codes: 0 success, 1 usage/config error, 2 numeric or convergence
// failure, 3 input exhausted while the recommendation is still Continue.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qbplan/closed_form.hpp"
#include "qbplan/errors.hpp"
#include "qbplan/plan_io.hpp"
#include "qbplan/policy.hpp"
#include "qbplan/simulator.hpp"
#include "qbplan/value_iteration.hpp"

namespace {

using namespace qbplan;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitExhausted = 3;

int env_max_sweeps(int fallback) {
  const char* v = std::getenv("QBPLAN_MAX_SWEEPS");
  if (v == nullptr || *v == '\0') return fallback;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1) {
    throw std::invalid_argument("QBPLAN_MAX_SWEEPS must be a positive integer");
  }
  return static_cast<int>(n);
}

struct ConfigFlags {
  double r = 1.0;
  double c = 0.0;
  double tau0 = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  int lump = 1;
  int grid_points = 2001;
  int quad_order = 40;
  double mu_pad = 6.0;
  int k_max = 200;
  int max_sweeps = 50;

  void add_common(CLI::App* cmd, bool need_cost) {
    cmd->add_option("--r", r, "observation precision (inverse variance)")
        ->required();
    auto* copt = cmd->add_option("--c", c, "cost per raw observation");
    if (need_cost) copt->required();
    cmd->add_option("--tau0", tau0, "prior precision")->required();
    cmd->add_option("--mu-lo", mu_lo, "lowest prior mean")->required();
    cmd->add_option("--mu-hi", mu_hi, "highest prior mean")->required();
    cmd->add_option("--lump", lump, "raw observations per decision epoch");
    cmd->add_option("--grid-points", grid_points, "mu-grid points");
    cmd->add_option("--quad-order", quad_order, "Gauss-Hermite order");
    cmd->add_option("--mu-pad", mu_pad, "grid padding in prior std units");
    cmd->add_option("--k-max", k_max, "ladder length cap");
    cmd->add_option("--max-sweeps", max_sweeps,
                    "sweep cap (env QBPLAN_MAX_SWEEPS overrides the default)");
  }

  ProblemConfig to_config(bool max_sweeps_given) const {
    ProblemConfig cfg;
    cfg.r = r;
    cfg.c = c;
    cfg.tau0 = tau0;
    cfg.mu_lo = mu_lo;
    cfg.mu_hi = mu_hi;
    cfg.lump = lump;
    cfg.solver.mu_points = grid_points;
    cfg.solver.quad_order = quad_order;
    cfg.solver.mu_pad = mu_pad;
    cfg.solver.k_max = k_max;
    cfg.solver.max_sweeps =
        max_sweeps_given ? max_sweeps : env_max_sweeps(max_sweeps);
    cfg.validate();
    return cfg;
  }
};

std::vector<double> parse_costs(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char a = 0, b = 0;
    std::istringstream ss(spec);
    if (!(ss >> lo >> a >> hi >> b >> step) || a != ':' || b != ':' ||
        !(step > 0.0) || hi < lo) {
      throw std::invalid_argument("cost range must be lo:hi:step");
    }
    const int n = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
    for (int i = 0; i < n; ++i) {
      // snap accumulated grid values back to clean decimals
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", lo + i * step);
      out.push_back(std::stod(buf));
    }
  } else {
    std::istringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) out.push_back(std::stod(tok));
    }
  }
  if (out.empty()) throw std::invalid_argument("no costs given");
  return out;
}

void print_report_line(std::ostream& os, const CredalState& state,
                       const RobustnessReport& report, Action action) {
  std::string adm;
  for (const Action& a : report.admissible) {
    if (!adm.empty()) adm += ',';
    adm += to_string(a);
  }
  os << "tau=" << format_double(state.tau) << " interval=["
     << format_double(state.mu_lo) << ", " << format_double(state.mu_hi)
     << "] action=" << to_string(action)
     << " robust=" << (report.robust ? "yes" : "no") << " admissible={" << adm
     << "}" << '\n';
}

int cmd_plan(const ConfigFlags& flags, bool max_sweeps_given,
             const std::string& out_path) {
  const ProblemConfig cfg = flags.to_config(max_sweeps_given);
  try {
    const Plan plan = solve(cfg);
    save_plan(plan, out_path);
    const bool closed = plan.sweep_count == 0;
    std::cout << "plan: levels=" << plan.levels.size() << " provenance="
              << (closed ? "closed_form" : "iterated")
              << " sweeps=" << plan.sweep_count << " -> " << out_path << '\n';
    return kExitOk;
  } catch (const SolveError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int cmd_threshold(double r, double tau0, double delta, double c_hi) {
  if (!(r > 0.0) || !(tau0 > 0.0) || delta < 0.0 || !(c_hi > 0.0)) {
    std::cerr << "error: require r > 0, tau0 > 0, delta >= 0, c-hi > 0\n";
    return kExitUsage;
  }
  try {
    const double c_dagger = min_closed_form_cost(r, tau0, delta, c_hi);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", c_dagger);
    std::cout << buf << '\n';
    return kExitOk;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int cmd_run(const std::string& plan_path, const std::string& obs_list,
            std::optional<double> obs_precision) {
  const Plan plan = load_plan(plan_path);
  const double step_r = plan.ladder_step();
  const double r_eff = obs_precision.value_or(step_r);

  std::vector<double> queued;
  if (!obs_list.empty()) {
    std::istringstream ss(obs_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) queued.push_back(std::stod(tok));
    }
  }
  std::size_t next = 0;
  auto read_obs = [&](double& x) -> bool {
    if (!obs_list.empty()) {
      if (next >= queued.size()) return false;
      x = queued[next++];
      return true;
    }
    std::string line;
    while (std::getline(std::cin, line)) {
      if (line.empty()) continue;
      x = std::stod(line);
      return true;
    }
    return false;
  };

  CredalState state = initial_state(plan);
  try {
    for (;;) {
      const RobustnessReport report = classify(plan, state);
      const DefaultAction decision = default_action(report, state);
      print_report_line(std::cout, state, report, decision.action);
      if (decision.action != Action::Continue) {
        return kExitOk;
      }
      double x = 0.0;
      if (!read_obs(x)) {
        std::cout << "recommendation: Continue (input exhausted)\n";
        return kExitExhausted;
      }
      state = update(state, Observation{x, r_eff});
    }
  } catch (const OffLadderError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int cmd_export_regions(const std::string& plan_path,
                       const std::string& out_path) {
  const Plan plan = load_plan(plan_path);
  if (out_path.empty()) {
    write_regions_csv(plan, std::cout);
  } else {
    std::ofstream os(out_path);
    if (!os) {
      std::cerr << "error: cannot open " << out_path << '\n';
      return kExitUsage;
    }
    write_regions_csv(plan, os);
  }
  return kExitOk;
}

int cmd_simulate(const std::string& plan_path, std::optional<double> theta,
                 const std::string& theta_normal, std::int64_t n,
                 std::uint64_t seed, const std::string& trace_path) {
  const Plan plan = load_plan(plan_path);
  ThetaSource source = ThetaSource::fixed(0.0);
  if (theta) {
    source = ThetaSource::fixed(*theta);
  } else if (!theta_normal.empty()) {
    double m = 0.0, s = 0.0;
    char comma = 0;
    std::istringstream ss(theta_normal);
    if (!(ss >> m >> comma >> s) || comma != ',' || !(s > 0.0)) {
      std::cerr << "error: --theta-normal expects mean,sd with sd > 0\n";
      return kExitUsage;
    }
    source = ThetaSource::normal(m, s);
  } else {
    std::cerr << "error: one of --theta or --theta-normal is required\n";
    return kExitUsage;
  }

  const SimulationSummary summary = monte_carlo(plan, source, n, seed);
  if (!trace_path.empty()) {
    // Trace of episode 0, re-run with its own seed.
    double th = source.value;
    if (source.kind == ThetaSource::Kind::Normal) {
      std::mt19937_64 trng(splitmix64(episode_seed(seed, 0)));
      th = source.mean + source.sd * standard_normal(trng);
    }
    try {
      const EpisodeResult ep = run_episode(plan, th, episode_seed(seed, 0), true);
      std::ofstream os(trace_path);
      if (!os) {
        std::cerr << "error: cannot open " << trace_path << '\n';
        return kExitUsage;
      }
      write_trace_csv(ep.trace, os);
    } catch (const EpisodeError& e) {
      std::cerr << "error: trace episode failed: " << e.what() << '\n';
      return kExitNumeric;
    }
  }
  std::cout << summary_to_json(summary).dump(2) << '\n';
  return kExitOk;
}

int cmd_bank(const ConfigFlags& flags, bool max_sweeps_given,
             const std::string& costs_spec, const std::string& out_dir,
             std::optional<int> sweep_budget, int lump_factor) {
  ConfigFlags f = flags;
  f.c = 1.0; // placeholder; per-cost configs are set by the bank
  const ProblemConfig base = f.to_config(max_sweeps_given);
  const std::vector<double> costs = parse_costs(costs_spec);

  BankOptions options;
  options.sweep_budget = sweep_budget;
  options.lump_factor = lump_factor;
  const BankResult bank = plan_bank(base, costs, options);

  std::vector<std::string> files;
  for (const BankEntry& e : bank.entries) {
    std::string file;
    if (e.plan) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "plan_c%.6g.json", e.cost);
      file = buf;
      save_plan(*e.plan, out_dir + "/" + file);
    }
    files.push_back(file);
  }
  {
    std::ofstream os(out_dir + "/manifest.json");
    if (!os) {
      std::cerr << "error: cannot open " << out_dir << "/manifest.json\n";
      return kExitUsage;
    }
    os << bank_manifest_json(bank, files).dump(2) << '\n';
  }
  for (std::size_t i = 0; i < bank.entries.size(); ++i) {
    const BankEntry& e = bank.entries[i];
    std::cout << "c=" << format_double(e.cost) << " status=" << to_string(e.status)
              << " sweeps=" << e.sweeps;
    if (!e.error.empty()) std::cout << " error=\"" << e.error << '"';
    std::cout << '\n';
  }
  return bank.any_failed ? kExitNumeric : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-Bayesian sequential-observation planner"};
  app.require_subcommand(1);

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "solve one cost and write a plan file");
  ConfigFlags plan_flags;
  plan_flags.add_common(plan_cmd, true);
  std::string plan_out = "plan.json";
  plan_cmd->add_option("-o,--out", plan_out, "output plan file");

  // threshold
  auto* thr_cmd = app.add_subcommand("threshold",
                                     "smallest cost with a closed-form plan");
  double thr_r = 0.0, thr_tau0 = 0.0, thr_delta = -1.0, thr_chi = 1.0;
  thr_cmd->add_option("--r", thr_r, "observation precision")->required();
  thr_cmd->add_option("--tau0", thr_tau0, "prior precision")->required();
  thr_cmd->add_option("--delta", thr_delta, "prior credal width")->required();
  thr_cmd->add_option("--c-hi", thr_chi, "upper end of the cost search");

  // run
  auto* run_cmd = app.add_subcommand("run", "execute a plan on observations");
  std::string run_plan, run_obs;
  double run_prec = 0.0;
  bool run_prec_given = false;
  run_cmd->add_option("--plan", run_plan, "plan file")->required();
  run_cmd->add_option("--obs", run_obs,
                      "comma-separated observations (default: stdin lines)");
  run_cmd->add_option("--obs-precision", run_prec,
                      "per-observation precision (default: plan ladder step)")
      ->each([&](const std::string&) { run_prec_given = true; });

  // export-regions
  auto* exp_cmd = app.add_subcommand("export-regions",
                                     "write per-level thresholds as CSV");
  std::string exp_plan, exp_out;
  exp_cmd->add_option("--plan", exp_plan, "plan file")->required();
  exp_cmd->add_option("-o,--out", exp_out, "output CSV (default: stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo episodes of a plan");
  std::string sim_plan, sim_theta_normal, sim_trace;
  double sim_theta = 0.0;
  bool sim_theta_given = false;
  std::int64_t sim_n = 1000;
  std::uint64_t sim_seed = 0;
  sim_cmd->add_option("--plan", sim_plan, "plan file")->required();
  sim_cmd->add_option("--theta", sim_theta, "fixed ground-truth mean")
      ->each([&](const std::string&) { sim_theta_given = true; });
  sim_cmd->add_option("--theta-normal", sim_theta_normal,
                      "ground-truth law mean,sd");
  sim_cmd->add_option("--n", sim_n, "episodes")->required();
  sim_cmd->add_option("--seed", sim_seed, "master seed")->required();
  sim_cmd->add_option("--trace", sim_trace, "write episode 0 trace CSV here");

  // bank
  auto* bank_cmd = app.add_subcommand("bank", "plans for a set of costs");
  ConfigFlags bank_flags;
  bank_flags.add_common(bank_cmd, false);
  std::string bank_costs, bank_out = ".";
  int bank_budget = 0;
  bool bank_budget_given = false;
  int bank_lump_factor = 2;
  bank_cmd->add_option("--costs", bank_costs, "lo:hi:step or comma list")
      ->required();
  bank_cmd->add_option("-o,--out", bank_out, "output directory");
  bank_cmd->add_option("--sweep-budget", bank_budget,
                       "sweep cap before the lumped retry")
      ->each([&](const std::string&) { bank_budget_given = true; });
  bank_cmd->add_option("--lump-factor", bank_lump_factor,
                       "raw observations per epoch in the lumped retry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) { // --help
      return app.exit(e);
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (plan_cmd->parsed()) {
      return cmd_plan(plan_flags, plan_cmd->count("--max-sweeps") > 0, plan_out);
    }
    if (thr_cmd->parsed()) {
      return cmd_threshold(thr_r, thr_tau0, thr_delta, thr_chi);
    }
    if (run_cmd->parsed()) {
      return cmd_run(run_plan, run_obs,
                     run_prec_given ? std::optional<double>(run_prec)
                                    : std::nullopt);
    }
    if (exp_cmd->parsed()) {
      return cmd_export_regions(exp_plan, exp_out);
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(sim_plan,
                          sim_theta_given ? std::optional<double>(sim_theta)
                                          : std::nullopt,
                          sim_theta_normal, sim_n, sim_seed, sim_trace);
    }
    if (bank_cmd->parsed()) {
      return cmd_bank(bank_flags, bank_cmd->count("--max-sweeps") > 0,
                      bank_costs, bank_out,
                      bank_budget_given ? std::optional<int>(bank_budget)
                                        : std::nullopt,
                      bank_lump_factor);
    }
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const SolveError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
