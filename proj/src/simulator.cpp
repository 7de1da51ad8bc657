#include "qbplan/simulator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qbplan/errors.hpp"
#include "qbplan/value_iteration.hpp"

namespace qbplan {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t episode_seed(std::uint64_t master_seed, std::int64_t index) {
  return splitmix64(master_seed +
                    static_cast<std::uint64_t>(index) * 0x9E3779B97F4A7C15ULL);
}

double standard_normal(std::mt19937_64& rng) {
  // 53-bit uniforms in (0,1); cosine branch of Box-Muller only, so one draw
  // consumes exactly two engine outputs.
  const double u1 =
      (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  const double u2 =
      (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  constexpr double two_pi = 6.283185307179586477;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

namespace {
std::string admissible_string(const RobustnessReport& report) {
  std::string out;
  for (const Action& a : report.admissible) {
    if (!out.empty()) out += ';';
    out += to_string(a);
  }
  return out;
}

int episode_epoch_cap(const Plan& plan) {
  const double b_stop0 = plan.levels.front().b_stop;
  const double horizon =
      b_stop0 * std::sqrt(plan.config.tau0) * b_stop0 * std::sqrt(plan.config.tau0);
  double h = std::ceil(horizon);
  if (!(h >= 1.0)) h = 1.0;
  if (h > 1e6) h = 1e6;
  return 10 * static_cast<int>(h);
}
} // namespace

EpisodeResult run_episode(const Plan& plan, double theta_true,
                          std::uint64_t seed, bool keep_trace) {
  if (!std::isfinite(theta_true)) {
    throw std::invalid_argument("run_episode: theta must be finite");
  }
  if (plan.levels.empty()) {
    throw std::invalid_argument("run_episode: plan has no levels");
  }
  std::mt19937_64 rng(seed);
  const int lump = plan.config.lump;
  const double r = plan.config.r;
  const double obs_sd = 1.0 / std::sqrt(r);
  const int cap = episode_epoch_cap(plan);

  EpisodeResult result;
  result.theta_true = theta_true;
  CredalState state = initial_state(plan);
  std::vector<TraceRow> trace;

  bool have_x = false;
  double last_x = 0.0;
  for (;;) {
    RobustnessReport report;
    DefaultAction decision;
    try {
      report = classify(plan, state);
      decision = default_action(report, state);
    } catch (const std::exception& e) {
      throw EpisodeError(std::string("run_episode: ") + e.what(),
                         std::move(trace));
    }
    ++result.epochs;
    if (!report.robust) ++result.robustness_incidents;
    if (keep_trace) {
      trace.push_back(TraceRow{result.epochs - 1, state.tau, state.mu_lo,
                               state.mu_hi, decision.action, report.robust,
                               admissible_string(report), have_x, last_x});
    }
    if (decision.action != Action::Continue) {
      result.final_action = decision.action;
      break;
    }
    if (result.epochs > cap) {
      std::ostringstream oss;
      oss << "run_episode: step cap of " << cap
          << " epochs exceeded (theta=" << theta_true << ")";
      throw EpisodeError(oss.str(), std::move(trace));
    }
    std::vector<Observation> raw;
    raw.reserve(lump);
    for (int i = 0; i < lump; ++i) {
      raw.push_back(Observation{theta_true + obs_sd * standard_normal(rng), r});
    }
    const Observation eff = lump == 1 ? raw.front() : qbplan::lump(raw);
    state = update(state, eff);
    result.n_obs += lump;
    have_x = true;
    last_x = eff.x;
  }

  const bool correct = result.final_action == Action::Stop1 ? theta_true > 0.0
                                                            : theta_true <= 0.0;
  result.terminal_loss = correct ? 0.0 : std::abs(theta_true);
  result.total_loss =
      result.terminal_loss + static_cast<double>(result.n_obs) * plan.config.c;
  result.trace = std::move(trace);
  return result;
}

SimulationSummary monte_carlo(const Plan& plan, const ThetaSource& theta,
                              std::int64_t episodes,
                              std::uint64_t master_seed) {
  if (episodes < 1) {
    throw std::invalid_argument("monte_carlo: episodes must be >= 1");
  }
  SimulationSummary s;
  s.episodes = episodes;
  s.master_seed = master_seed;
  double loss_sum = 0.0;
  double n_sum = 0.0;
  std::int64_t stop0 = 0;
  std::int64_t stop1 = 0;
  std::int64_t epochs = 0;
  std::int64_t nonrobust = 0;
  std::int64_t ok = 0;
  for (std::int64_t i = 0; i < episodes; ++i) {
    const std::uint64_t seed = episode_seed(master_seed, i);
    double th = theta.value;
    if (theta.kind == ThetaSource::Kind::Normal) {
      std::mt19937_64 trng(splitmix64(seed));
      th = theta.mean + theta.sd * standard_normal(trng);
    }
    try {
      const EpisodeResult ep = run_episode(plan, th, seed);
      ++ok;
      loss_sum += ep.total_loss;
      n_sum += static_cast<double>(ep.n_obs);
      epochs += ep.epochs;
      nonrobust += ep.robustness_incidents;
      (ep.final_action == Action::Stop1 ? stop1 : stop0) += 1;
    } catch (const EpisodeError&) {
      ++s.failed_episodes;
    }
  }
  if (ok > 0) {
    s.mean_total_loss = loss_sum / static_cast<double>(ok);
    s.mean_n_obs = n_sum / static_cast<double>(ok);
    s.freq_stop0 = static_cast<double>(stop0) / static_cast<double>(ok);
    s.freq_stop1 = static_cast<double>(stop1) / static_cast<double>(ok);
  }
  if (epochs > 0) {
    s.frac_epochs_nonrobust =
        static_cast<double>(nonrobust) / static_cast<double>(epochs);
  }
  return s;
}

std::vector<AgentComparison> compare_agents(
    const ProblemConfig& base, const std::vector<double>& costs,
    std::int64_t episodes, std::uint64_t master_seed, const ThetaSource& theta,
    double eps_bayes) {
  base.validate();
  if (eps_bayes <= 0.0) {
    eps_bayes = 1e-3 * base.delta();
  }
  if (!(eps_bayes > 0.0)) {
    throw std::invalid_argument(
        "compare_agents: eps_bayes must be > 0 (degenerate base width)");
  }
  std::vector<AgentComparison> out;
  for (double cost : costs) {
    AgentComparison cmp;
    cmp.cost = cost;

    ProblemConfig qb_cfg = base;
    qb_cfg.c = cost;
    std::optional<Plan> qb_plan;
    try {
      qb_plan = solve(qb_cfg);
      cmp.qb_ok = true;
      cmp.qb_sweeps = qb_plan->sweep_count;
    } catch (const SolveError& e) {
      cmp.qb_error = e.what();
    }

    ProblemConfig bayes_cfg = base;
    bayes_cfg.c = cost;
    const double mid = 0.5 * (base.mu_lo + base.mu_hi);
    bayes_cfg.mu_lo = mid;
    bayes_cfg.mu_hi = mid;
    std::optional<Plan> bayes_plan;
    try {
      bayes_plan = solve_to_band_width(bayes_cfg, eps_bayes);
      cmp.bayes_ok = true;
      cmp.bayes_sweeps = bayes_plan->sweep_count;
    } catch (const SolveError& e) {
      cmp.bayes_error = e.what();
    }

    if (qb_plan && bayes_plan) {
      // Matched seeds: both agents face identical observation streams.
      double qb_loss = 0.0;
      double bayes_loss = 0.0;
      std::int64_t ok = 0;
      for (std::int64_t i = 0; i < episodes; ++i) {
        const std::uint64_t seed = episode_seed(master_seed, i);
        double th = theta.value;
        if (theta.kind == ThetaSource::Kind::Normal) {
          std::mt19937_64 trng(splitmix64(seed));
          th = theta.mean + theta.sd * standard_normal(trng);
        }
        try {
          const EpisodeResult a = run_episode(*qb_plan, th, seed);
          const EpisodeResult b = run_episode(*bayes_plan, th, seed);
          qb_loss += a.total_loss;
          bayes_loss += b.total_loss;
          ++ok;
        } catch (const EpisodeError&) {
        }
      }
      if (ok > 0) {
        cmp.qb_mean_loss = qb_loss / static_cast<double>(ok);
        cmp.bayes_mean_loss = bayes_loss / static_cast<double>(ok);
      }
    }
    out.push_back(std::move(cmp));
  }
  return out;
}

} // namespace qbplan
