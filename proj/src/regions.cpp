#include "qbplan/regions.hpp"

#include <stdexcept>

namespace qbplan {

std::string to_string(Provenance p) {
  return p == Provenance::ClosedForm ? "closed_form" : "iterated";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "closed_form") return Provenance::ClosedForm;
  if (s == "iterated") return Provenance::Iterated;
  throw std::invalid_argument("unknown provenance: " + s);
}

Region classify_point(const RegionBounds& bounds, double mu) {
  // b_stop == 0 certifies stopping on the whole line; the Continue region is
  // empty there and the |mu| <= b_continue test must not claim the origin.
  if (bounds.b_stop == 0.0) {
    return mu >= 0.0 ? Region::Stop1 : Region::Stop0;
  }
  if (mu <= bounds.b_continue && mu >= -bounds.b_continue) {
    return Region::Continue;
  }
  if (mu >= bounds.b_stop) return Region::Stop1;
  if (mu <= -bounds.b_stop) return Region::Stop0;
  return Region::Indeterminate;
}

} // namespace qbplan
