#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbplan/credal.hpp"
#include "qbplan/plan.hpp"

namespace qbplan {

enum class Action { Continue, Stop0, Stop1 };

std::string to_string(Action a);

/// Where the credal segment sits relative to one ladder level's regions.
/// `admissible` lists the determined regions the segment intersects, in the
/// fixed order Continue, Stop0, Stop1. A report is robust when the segment
/// lies inside exactly one determined region with no indeterminate overlap.
/// fully_indeterminate means no determined region is touched at all, which
/// demands refinement rather than action.
struct RobustnessReport {
  std::vector<Action> admissible;
  bool robust = false;
  double indeterminate_overlap = 0.0; // fraction of segment length
  bool fully_indeterminate = false;
  double tau_level = 0.0;
  int level_index = -1;

  bool admits(Action a) const;
};

RobustnessReport classify(const Plan& plan, const CredalState& state);

/// Anytime default: Continue when admissible, otherwise the stop action
/// optimal for the segment midpoint. tie is set when the midpoint is
/// exactly 0 (Stop0 returned by convention). Throws std::domain_error when
/// the report is fully indeterminate.
struct DefaultAction {
  Action action = Action::Continue;
  bool tie = false;
};

DefaultAction default_action(const RobustnessReport& report,
                             const CredalState& state);

struct StepResult {
  Action action = Action::Continue;
  CredalState state;
  RobustnessReport report;
};

/// Absorb an optional observation, classify, and pick the default action.
/// A Stop action is terminal. The observation's precision must match the
/// plan's ladder step.
StepResult step(const Plan& plan, const CredalState& state,
                const std::optional<Observation>& obs);

/// Prior credal segment of a plan's configuration.
CredalState initial_state(const Plan& plan);

struct BankOptions {
  std::optional<int> sweep_budget; // first-attempt cap; default: config cap
  int lump_factor = 2;
  bool allow_lumping = true;
};

struct BankEntry {
  enum class Status { ClosedForm, Iterated, Lumped, Failed };
  double cost = 0.0;
  Status status = Status::Failed;
  int sweeps = 0;
  std::string error;
  std::optional<Plan> plan;
};

std::string to_string(BankEntry::Status s);

struct BankResult {
  std::vector<BankEntry> entries; // ascending by cost
  double c_dagger = 0.0;          // +inf when no cost in range is closed-form
  bool any_failed = false;
};

/// Plans for a set of costs sharing one base configuration. Costs above the
/// closed-form threshold are stored directly; the rest are solved by value
/// iteration in descending cost order. A cost whose solve exhausts a cap is
/// retried with lumped observations (lump_factor raw observations per
/// epoch) under the configuration's full sweep cap. Individual failures are
/// recorded per cost and do not abort the bank.
BankResult plan_bank(const ProblemConfig& base, std::vector<double> costs,
                     const BankOptions& options = {});

} // namespace qbplan
