#include "qbplan/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qbplan/closed_form.hpp"
#include "qbplan/errors.hpp"
#include "qbplan/value_iteration.hpp"

namespace qbplan {

std::string to_string(Action a) {
  switch (a) {
    case Action::Continue: return "Continue";
    case Action::Stop0: return "Stop0";
    case Action::Stop1: return "Stop1";
  }
  return "?";
}

std::string to_string(BankEntry::Status s) {
  switch (s) {
    case BankEntry::Status::ClosedForm: return "closed_form";
    case BankEntry::Status::Iterated: return "iterated";
    case BankEntry::Status::Lumped: return "lumped";
    case BankEntry::Status::Failed: return "failed";
  }
  return "?";
}

bool RobustnessReport::admits(Action a) const {
  return std::find(admissible.begin(), admissible.end(), a) != admissible.end();
}

namespace {
double overlap_length(double lo, double hi, double a, double b) {
  const double l = std::max(lo, a);
  const double h = std::min(hi, b);
  return h > l ? h - l : 0.0;
}
} // namespace

RobustnessReport classify(const Plan& plan, const CredalState& state) {
  const RegionBounds& rb = plan.level_at(state.tau);

  RobustnessReport report;
  report.tau_level = rb.tau_level;
  report.level_index = plan.level_index(state.tau);

  const double lo = state.mu_lo;
  const double hi = state.mu_hi;
  // A level with b_stop == 0 is stop-everywhere: its Continue region is
  // empty, so only the stop labels can be admissible.
  const bool stop_everywhere = rb.b_stop == 0.0;
  const bool cont =
      !stop_everywhere && lo <= rb.b_continue && hi >= -rb.b_continue;
  const bool stop1 = hi >= rb.b_stop;
  const bool stop0 = lo <= -rb.b_stop;
  if (cont) report.admissible.push_back(Action::Continue);
  if (stop0) report.admissible.push_back(Action::Stop0);
  if (stop1) report.admissible.push_back(Action::Stop1);

  const double width = state.width();
  if (width > 0.0) {
    const double in_band = overlap_length(lo, hi, rb.b_continue, rb.b_stop) +
                           overlap_length(lo, hi, -rb.b_stop, -rb.b_continue);
    report.indeterminate_overlap = in_band / width;
  } else {
    report.indeterminate_overlap =
        classify_point(rb, lo) == Region::Indeterminate ? 1.0 : 0.0;
  }
  report.fully_indeterminate = report.admissible.empty();
  report.robust =
      report.admissible.size() == 1 && report.indeterminate_overlap == 0.0;
  return report;
}

DefaultAction default_action(const RobustnessReport& report,
                             const CredalState& state) {
  if (report.fully_indeterminate) {
    throw std::domain_error(
        "default_action: refinement required (segment fully inside the "
        "indeterminate band)");
  }
  if (report.admits(Action::Continue)) {
    return DefaultAction{Action::Continue, false};
  }
  const double mid = state.midpoint();
  if (mid > 0.0) return DefaultAction{Action::Stop1, false};
  if (mid < 0.0) return DefaultAction{Action::Stop0, false};
  return DefaultAction{Action::Stop0, true};
}

StepResult step(const Plan& plan, const CredalState& state,
                const std::optional<Observation>& obs) {
  CredalState next = state;
  if (obs) {
    const double step_r = plan.ladder_step();
    if (std::abs(obs->r_eff - step_r) >
        plan.config.solver.tau_tol * std::max(1.0, step_r)) {
      throw OffLadderError(
          "step: observation precision does not match the plan ladder step");
    }
    next = update(state, *obs);
  }
  StepResult out;
  out.report = classify(plan, next);
  out.action = default_action(out.report, next).action;
  out.state = next;
  return out;
}

CredalState initial_state(const Plan& plan) {
  return CredalState{plan.config.tau0, plan.config.mu_lo, plan.config.mu_hi, 0};
}

BankResult plan_bank(const ProblemConfig& base, std::vector<double> costs,
                     const BankOptions& options) {
  base.validate();
  for (double c : costs) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("plan_bank: costs must be > 0");
    }
  }
  BankResult result;
  if (costs.empty()) {
    result.c_dagger = std::numeric_limits<double>::infinity();
    return result;
  }
  std::sort(costs.begin(), costs.end(), std::greater<double>());

  const double c_max = costs.front();
  if (theorem1_condition(c_max * base.lump, base.r * base.lump, base.tau0,
                         base.delta())) {
    result.c_dagger =
        min_closed_form_cost(base.r * base.lump, base.tau0, base.delta(),
                             c_max * base.lump) /
        base.lump;
  } else {
    result.c_dagger = std::numeric_limits<double>::infinity();
  }

  for (double cost : costs) {
    BankEntry entry;
    entry.cost = cost;
    ProblemConfig cfg = base;
    cfg.c = cost;
    if (options.sweep_budget) {
      cfg.solver.max_sweeps = *options.sweep_budget;
    }
    try {
      Plan plan = solve(cfg);
      entry.sweeps = plan.sweep_count;
      entry.status = plan.sweep_count == 0 ? BankEntry::Status::ClosedForm
                                           : BankEntry::Status::Iterated;
      entry.plan = std::move(plan);
    } catch (const SolveError& first_err) {
      if (!options.allow_lumping) {
        entry.status = BankEntry::Status::Failed;
        entry.error = first_err.what();
      } else {
        // Lumped retry: coarser epochs halve the ladder; run it under the
        // configuration's full sweep cap rather than the trigger budget.
        ProblemConfig lumped = base;
        lumped.c = cost;
        lumped.lump = base.lump * options.lump_factor;
        try {
          Plan plan = solve(lumped);
          entry.sweeps = plan.sweep_count;
          entry.status = BankEntry::Status::Lumped;
          entry.plan = std::move(plan);
        } catch (const SolveError& second_err) {
          entry.status = BankEntry::Status::Failed;
          entry.error = std::string(first_err.what()) +
                        "; lumped retry: " + second_err.what();
        }
      }
    }
    result.any_failed |= entry.status == BankEntry::Status::Failed;
    result.entries.push_back(std::move(entry));
  }
  std::reverse(result.entries.begin(), result.entries.end());
  return result;
}

} // namespace qbplan
