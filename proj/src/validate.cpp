#include <cmath>

#include "dynzeta/map.hpp"
#include "dynzeta/symbolic.hpp"

namespace dynzeta {

MapValidationReport validate_map(const PiecewiseMonotoneMap& map,
                                 const Weight& w) {
  check_weight_admissible(map, w);

  MapValidationReport report;
  const int n = map.branch_count();

  for (int i = 0; i + 1 < n; ++i) {
    const double a = map.interval_hi(i);
    report.continuity_residuals.push_back(
        std::abs(map.branch(i).value(a) - map.branch(i + 1).value(a)));
  }

  // Strict monotonicity: endpoint images differ and the derivative keeps
  // its sign on a grid.
  report.monotone_ok = true;
  constexpr int kGrid = 33;
  for (int i = 0; i < n && report.monotone_ok; ++i) {
    const Branch& b = map.branch(i);
    if (b.value(b.lo) == b.value(b.hi)) {
      report.monotone_ok = false;
      break;
    }
    const double sign = b.increasing() ? 1.0 : -1.0;
    for (int k = 0; k <= kGrid; ++k) {
      const double x = b.lo + (b.hi - b.lo) * k / kGrid;
      if (sign * b.derivative(x) <= 0.0) {
        report.monotone_ok = false;
        break;
      }
    }
  }

  report.into_ok = true;
  for (int i = 0; i < n; ++i) {
    const auto [rlo, rhi] = map.branch(i).range();
    if (rlo < -1e-12 || rhi > 1.0 + 1e-12) report.into_ok = false;
  }

  report.schwarzian_negative = schwarzian_check(map);

  if (map.all_affine()) {
    const auto res = slope_resonance_check(map, 20);
    report.slope_resonance_free = res.found ? TriState::no : TriState::yes;
  } else {
    report.slope_resonance_free = TriState::unknown;
  }

  report.generating = generating_certificate(map);
  return report;
}

}  // namespace dynzeta
