#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbplan/plan.hpp"
#include "qbplan/policy.hpp"

namespace qbplan {

/// One classification epoch of an episode. x is the (possibly lumped)
/// observation absorbed before this classification; the first epoch has
/// none.
struct TraceRow {
  int step = 0;
  double tau = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  Action action = Action::Continue;
  bool robust = false;
  std::string admissible;
  bool has_x = false;
  double x = 0.0;
};

struct EpisodeResult {
  double theta_true = 0.0;
  Action final_action = Action::Stop0;
  std::int64_t n_obs = 0;   // raw observations (lumped epochs count each draw)
  double terminal_loss = 0.0;
  double total_loss = 0.0;  // terminal_loss + n_obs * c, exactly
  int epochs = 0;           // classification epochs
  int robustness_incidents = 0;
  std::vector<TraceRow> trace; // filled only when requested
};

/// Episode or step-cap failure carrying the partial trace.
struct EpisodeError : std::runtime_error {
  EpisodeError(const std::string& msg, std::vector<TraceRow> partial)
      : std::runtime_error(msg), trace(std::move(partial)) {}
  std::vector<TraceRow> trace;
};

/// Ground-truth source for episodes: a fixed value or a Normal law.
struct ThetaSource {
  enum class Kind { Fixed, Normal };
  Kind kind = Kind::Fixed;
  double value = 0.0;
  double mean = 0.0;
  double sd = 1.0;

  static ThetaSource fixed(double v) { return ThetaSource{Kind::Fixed, v, 0, 1}; }
  static ThetaSource normal(double m, double s) {
    return ThetaSource{Kind::Normal, 0, m, s};
  }
};

struct SimulationSummary {
  std::int64_t episodes = 0;
  std::int64_t failed_episodes = 0;
  double mean_total_loss = 0.0;
  double mean_n_obs = 0.0;
  double freq_stop0 = 0.0;
  double freq_stop1 = 0.0;
  double frac_epochs_nonrobust = 0.0;
  std::uint64_t master_seed = 0;
};

/// SplitMix64 step; the documented per-episode seeding rule is
///   seed_i = splitmix64(master_seed + (i + 1) * 0x9E3779B97F4A7C15).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t episode_seed(std::uint64_t master_seed, std::int64_t index);

/// Standard normal draw by Box-Muller on 53-bit uniforms from the engine;
/// fixed algorithm so streams are reproducible across standard libraries.
double standard_normal(std::mt19937_64& rng);

/// Execute one episode: start from the plan's prior segment, classify,
/// continue by drawing `lump` raw observations x ~ N(theta, 1/r) per epoch
/// (lumped into one ladder step), stop at the first Stop action.
/// Deterministic given the seed. Throws EpisodeError on the step cap
/// (10 x ceil((b_stop(tau0) sqrt(tau0))^2) epochs) with the partial trace.
EpisodeResult run_episode(const Plan& plan, double theta_true,
                          std::uint64_t seed, bool keep_trace = false);

/// N independent episodes with per-episode seeds from episode_seed();
/// episode failures are counted, not fatal. Aggregation runs in episode
/// order so the summary is bit-deterministic.
SimulationSummary monte_carlo(const Plan& plan, const ThetaSource& theta,
                              std::int64_t episodes,
                              std::uint64_t master_seed);

/// One cost's quasi-Bayesian vs single-prior-Bayesian comparison. The
/// baseline collapses the segment to its midpoint and iterates until every
/// level's indeterminate band is below eps_bayes; sweep counts quantify the
/// computation each agent paid for plans of equal standing.
struct AgentComparison {
  double cost = 0.0;
  bool qb_ok = false;
  bool bayes_ok = false;
  int qb_sweeps = -1;
  int bayes_sweeps = -1;
  double qb_mean_loss = 0.0;
  double bayes_mean_loss = 0.0;
  std::string qb_error;
  std::string bayes_error;
};

/// Matched-seed comparison across costs; eps_bayes defaults to
/// 1e-3 * delta when not given (> 0 required).
std::vector<AgentComparison> compare_agents(
    const ProblemConfig& base, const std::vector<double>& costs,
    std::int64_t episodes, std::uint64_t master_seed,
    const ThetaSource& theta, double eps_bayes = -1.0);

} // namespace qbplan
