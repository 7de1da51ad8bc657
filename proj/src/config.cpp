#include "qbplan/config.hpp"

#include <cmath>
#include <stdexcept>

namespace qbplan {

void ProblemConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("config: ") + what +
                                  " must be > 0");
    }
  };
  positive(r, "r");
  positive(c, "c");
  positive(tau0, "tau0");
  if (!std::isfinite(mu_lo) || !std::isfinite(mu_hi) || mu_lo > mu_hi) {
    throw std::invalid_argument("config: requires mu_lo <= mu_hi, both finite");
  }
  if (lump < 1) {
    throw std::invalid_argument("config: lump must be >= 1");
  }
  if (solver.mu_points < 2 || solver.quad_order < 1 || solver.k_max < 1 ||
      solver.max_sweeps < 1 || !(solver.mu_pad > 0.0) ||
      !(solver.eps_eq > 0.0) || !(solver.tau_tol > 0.0)) {
    throw std::invalid_argument("config: invalid solver settings");
  }
}

} // namespace qbplan
