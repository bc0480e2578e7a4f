#ifndef DYNZETA_PRESSURE_HPP
#define DYNZETA_PRESSURE_HPP

#include <string>
#include <vector>

#include "dynzeta/map.hpp"
#include "dynzeta/periodic.hpp"

namespace dynzeta {

struct PressureEstimate {
  std::vector<double> p_sequence;  // P_m = (1/m) log T_m(|g|), index m-1
  double p_hat = 0.0;              // 1/m-extrapolated limit
  std::string method;
  bool defined = true;
  std::string diagnostic;
};

struct BoundsReport {
  double theta = 0.0;
  double r = 0.0;
  double p_hat = 0.0;
  bool degenerate = false;  // pressure undefined; bounds vacuous
  bool left_ok = false;     // theta <= r
  bool right_ok = false;    // r <= max(theta, exp p_hat), with estimator slack
  bool eigen_claim_applicable = false;  // g >= 0 and r > 1.05 theta
  bool eigen_claim_ok = false;  // r = exp p_hat and r is an eigenvalue
  double left_residual = 0.0;
  double right_residual = 0.0;
  double eigen_residual = 0.0;
};

/// P_m = (1/m) log sum over period-m records of |weight product|, plus a
/// least-squares fit of P_m = P + c/m over the top half of the available m.
PressureEstimate pressure_from_orbits(const PiecewiseMonotoneMap& map,
                                      const Weight& w,
                                      const RepresentativeSet& set, int m_max);

/// Checks theta <= r <= max(theta, exp p_hat) and, for nonnegative weights
/// with r clear of theta, that r = exp p_hat appears among the eigenvalues.
BoundsReport verify_pressure_bounds(double theta, double r,
                                    const PressureEstimate& pressure,
                                    bool g_nonneg,
                                    const std::vector<cplx>& eigenvalues,
                                    double match_tol);

}  // namespace dynzeta

#endif  // DYNZETA_PRESSURE_HPP
