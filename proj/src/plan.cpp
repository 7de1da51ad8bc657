#include "qbplan/plan.hpp"

#include <cmath>
#include <sstream>

#include "qbplan/errors.hpp"

namespace qbplan {

int Plan::level_index(double tau) const {
  if (levels.empty()) return -1;
  const double step = ladder_step();
  const double k_real = (tau - config.tau0) / step;
  const long k = std::lround(k_real);
  if (k < 0 || k >= static_cast<long>(levels.size())) return -1;
  const double tau_k = levels[static_cast<std::size_t>(k)].tau_level;
  if (std::abs(tau - tau_k) > config.solver.tau_tol * std::max(1.0, tau)) {
    return -1;
  }
  return static_cast<int>(k);
}

const RegionBounds& Plan::level_at(double tau) const {
  const int k = level_index(tau);
  if (k < 0) {
    std::ostringstream oss;
    oss << "off-ladder state: tau=" << tau << " does not match ladder "
        << config.tau0 << " + k*" << ladder_step() << " within "
        << levels.size() << " levels";
    throw OffLadderError(oss.str());
  }
  return levels[static_cast<std::size_t>(k)];
}

} // namespace qbplan
