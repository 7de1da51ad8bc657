#pragma once

#include <string>

namespace qbplan {

enum class Provenance { ClosedForm, Iterated };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Decision-region thresholds for one precision level of the ladder.
///
/// Classification of a point mean mu:
///   |mu| <= b_continue  -> Continue
///   mu >= b_stop        -> Stop1
///   mu <= -b_stop       -> Stop0
///   otherwise           -> Indeterminate
/// Invariant: 0 <= b_continue <= b_stop.
struct RegionBounds {
  double tau_level = 0.0;
  double b_continue = 0.0;
  double b_stop = 0.0;
  Provenance provenance = Provenance::ClosedForm;
};

enum class Region { Continue, Stop1, Stop0, Indeterminate };

Region classify_point(const RegionBounds& bounds, double mu);

} // namespace qbplan
