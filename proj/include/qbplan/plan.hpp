#pragma once

#include <vector>

#include "qbplan/config.hpp"
#include "qbplan/regions.hpp"

namespace qbplan {

/// The persisted artifact: per-level decision-region thresholds over the
/// precision ladder tau0 + k*step for consecutive k starting at 0, where
/// step = lump * r. Immutable after construction.
struct Plan {
  ProblemConfig config;
  std::vector<RegionBounds> levels;
  int sweep_count = 0;

  double ladder_step() const { return config.step_precision(); }

  /// Ladder index for a precision, or -1 when it is off the ladder
  /// (relative tolerance config.solver.tau_tol).
  int level_index(double tau) const;

  /// Level record for a precision; throws OffLadderError when off-ladder.
  const RegionBounds& level_at(double tau) const;
};

} // namespace qbplan
