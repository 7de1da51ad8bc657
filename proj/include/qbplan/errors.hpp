#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qbplan/regions.hpp"

namespace qbplan {

/// Ladder or sweep caps exhausted before the termination criterion held.
/// Carries whatever bounds were certified so far.
struct SolveError : std::runtime_error {
  SolveError(const std::string& msg, std::vector<RegionBounds> partial_bounds,
             int sweeps)
      : std::runtime_error(msg),
        partial(std::move(partial_bounds)),
        sweeps_done(sweeps) {}
  std::vector<RegionBounds> partial;
  int sweeps_done = 0;
};

/// A state's precision does not sit on the plan ladder (wrong observation
/// precision or missing lumping).
struct OffLadderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite value or structurally impossible certification inside the
/// grid engine; indicates grid/quadrature misconfiguration.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace qbplan
