#include "dynzeta/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynzeta {

PressureEstimate pressure_from_orbits(const PiecewiseMonotoneMap& map,
                                      const Weight& w,
                                      const RepresentativeSet& set, int m_max) {
  if (m_max < 4) throw MapError("pressure estimate needs m_max >= 4");
  if (m_max > set.m_max) throw MapError("pressure beyond the built m_max");

  PressureEstimate est;
  est.method = "orbit-sum-1/m-fit";
  bool any_positive = false;
  for (int m = 1; m <= m_max; ++m) {
    double abs_sum = 0.0;
    for (const auto& rec : set.period(m))
      abs_sum += std::abs(record_weight_product(map, w, rec));
    if (abs_sum > 0.0) {
      est.p_sequence.push_back(std::log(abs_sum) / m);
      any_positive = true;
    } else {
      est.p_sequence.push_back(-std::numeric_limits<double>::infinity());
    }
  }
  if (!any_positive) {
    est.defined = false;
    est.p_hat = -std::numeric_limits<double>::infinity();
    est.diagnostic = "all trace sums vanish; pressure undefined";
    return est;
  }

  // Fit P_m = P + c/m over the top half of the usable entries.
  std::vector<std::pair<double, double>> pts;  // (1/m, P_m)
  const int from = m_max / 2 + 1;
  for (int m = from; m <= m_max; ++m)
    if (std::isfinite(est.p_sequence[m - 1]))
      pts.emplace_back(1.0 / m, est.p_sequence[m - 1]);
  if (pts.size() < 2) {
    for (int m = m_max; m >= 1; --m)
      if (std::isfinite(est.p_sequence[m - 1])) {
        est.p_hat = est.p_sequence[m - 1];
        est.diagnostic = "too few usable P_m; using the deepest value";
        return est;
      }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(pts.size());
  const double denom = nn * sxx - sx * sx;
  const double slope = (nn * sxy - sx * sy) / denom;
  est.p_hat = (sy - slope * sx) / nn;  // intercept at 1/m -> 0
  return est;
}

BoundsReport verify_pressure_bounds(double theta, double r,
                                    const PressureEstimate& pressure,
                                    bool g_nonneg,
                                    const std::vector<cplx>& eigenvalues,
                                    double match_tol) {
  BoundsReport report;
  report.theta = theta;
  report.r = r;
  report.p_hat = pressure.p_hat;

  if (!pressure.defined) {
    report.degenerate = true;
    report.left_ok = theta <= r + 1e-6;
    report.right_ok = true;  // vacuous without a pressure value
    report.left_residual = theta - r;
    return report;
  }

  report.left_residual = theta - r;
  report.left_ok = theta <= r + 1e-6;

  const double bound = std::max(theta, std::exp(pressure.p_hat));
  report.right_residual = r - bound;
  report.right_ok = r <= bound + std::max(1e-6, 0.02 * r);

  report.eigen_claim_applicable = g_nonneg && r > theta * 1.05;
  if (report.eigen_claim_applicable) {
    const double ep = std::exp(pressure.p_hat);
    report.eigen_residual = std::abs(r - ep);
    bool present = false;
    for (const cplx& ev : eigenvalues)
      if (std::abs(ev - cplx(r, 0.0)) <= match_tol) present = true;
    report.eigen_claim_ok = report.eigen_residual <= 0.02 * r && present;
  }
  return report;
}

}  // namespace dynzeta
