#ifndef DYNZETA_SERIES_HPP
#define DYNZETA_SERIES_HPP

#include <vector>

#include "dynzeta/map.hpp"
#include "dynzeta/symbolic.hpp"

namespace dynzeta {

/// Truncated power series c_0 + c_1 z + ... + c_M z^M.
struct PowerSeries {
  std::vector<cplx> c;

  int order() const { return static_cast<int>(c.size()) - 1; }
  cplx eval(cplx z) const;
};

struct Zero {
  cplx location;
  int multiplicity = 1;
  double stability = 0.0;  // root shift when recomputed at order M-2
  bool unstable = false;
};

struct ZetaResult {
  PowerSeries d;
  std::vector<Zero> zeros;          // |z| <= validity_radius
  std::vector<Zero> outside;        // roots beyond the radius; no claim attached
  double validity_radius = 0.0;
};

/// d(z) = exp(-sum_m T_m z^m / m) via the recurrence
/// n c_n = -sum_{m=1}^n T_m c_{n-m}, c_0 = 1.  T[0] holds T_1.
PowerSeries d_series_from_traces(const std::vector<cplx>& traces);

/// Reciprocal series of d (requires c_0 = 1): the dynamical zeta function.
PowerSeries zeta_series(const PowerSeries& d);

/// Roots of the degree-M truncation of d via its companion matrix, Newton
/// refined, clustered within 1e-6 into multiplicities. Roots with
/// |z| <= rho populate .zeros; the rest are reported as outside validity.
/// Stability is measured against the roots of the order-(M-2) truncation,
/// and roots shifting more than 1e-4 * rho are flagged unstable.
ZetaResult find_zeros_in_disk(const PowerSeries& d, double rho);

/// Exact d(z) = det(I - zM) for Markov maps with piecewise-constant
/// weights, M_{ji} = g_i t_{ij}. Principal-minor expansion for N <= 8,
/// Faddeev-LeVerrier recursion otherwise.
PowerSeries markov_determinant_oracle(const TransitionStructure& ts,
                                      const std::vector<cplx>& g_values);

}  // namespace dynzeta

#endif  // DYNZETA_SERIES_HPP
