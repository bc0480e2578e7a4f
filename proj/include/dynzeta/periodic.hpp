#ifndef DYNZETA_PERIODIC_HPP
#define DYNZETA_PERIODIC_HPP

#include <optional>
#include <utility>
#include <vector>

#include "dynzeta/map.hpp"
#include "dynzeta/symbolic.hpp"

namespace dynzeta {

/// Solutions of f^m(x) = x inside one cylinder. Either a finite list of
/// isolated points, or the whole cylinder when f^m is the identity on it
/// (slope exactly 1, residual exactly 0 -- the uncountable-Per-f case).
struct FixedPointResult {
  std::vector<double> points;
  std::optional<std::pair<double, double>> interval;
  bool tangential = false;  // |h| touched zero without a sign change

  bool empty() const { return points.empty() && !interval; }
};

struct PeriodicPointRecord {
  double x = 0.0;
  int period = 0;  // length m, not necessarily the prime period
  SymbolWord word;
  cplx weight_product{1.0, 0.0};
  bool degenerate = false;  // representative of a fixed interval
  bool tangential = false;
};

enum class Representativity {
  generating,
  negative_schwarzian,
  slope_resonance_free,
  constructed,  // no sufficient condition holds; zeta_S semantics apply
};

const char* to_string(Representativity r);

/// One periodic point per admissible periodic word, per period m <= m_max.
struct RepresentativeSet {
  int m_max = 0;
  std::vector<std::vector<PeriodicPointRecord>> by_period;  // index m-1
  Representativity certificate = Representativity::constructed;

  const std::vector<PeriodicPointRecord>& period(int m) const {
    return by_period[m - 1];
  }
};

/// All solutions of f^m(x) = x in the cylinder. The word must have length m
/// and f^m is monotone on the cylinder by construction. Decreasing
/// composites bisect the unique crossing; increasing affine composites are
/// solved in closed form (identity detected exactly); increasing nonlinear
/// composites isolate sign changes on a 64-point grid, with near-tangential
/// roots reported once and flagged.
FixedPointResult fixed_points_in_cylinder(const PiecewiseMonotoneMap& map,
                                          const Cylinder& cyl, int m);

/// Builds the set cylinder-by-cylinder: isolated points directly, interval
/// fixed sets through their midpoint. A point on a shared cylinder boundary
/// is kept only where its tie-rule itinerary matches the cylinder word, so
/// it is counted exactly once. Records are sorted by word within each
/// period; weight products are left at 1 (see fill_weight_products).
RepresentativeSet build_representative_set(const PiecewiseMonotoneMap& map,
                                           int m_max,
                                           std::size_t cap = kDefaultCylinderCap);

/// Weight product of one record: the orbit product at x, except that
/// degenerate records with a weight constant on the partition use the exact
/// symbolic word product.
cplx record_weight_product(const PiecewiseMonotoneMap& map, const Weight& w,
                           const PeriodicPointRecord& rec);

/// Stores record_weight_product on every record (for export).
void fill_weight_products(const PiecewiseMonotoneMap& map, const Weight& w,
                          RepresentativeSet& set);

/// T_m = sum over period-m records of the m-fold weight product, summed in
/// sorted-word order. Returns T_1..T_{m_max}.
std::vector<cplx> trace_sums(const PiecewiseMonotoneMap& map, const Weight& w,
                             const RepresentativeSet& set, int m_max);

/// Which sufficient condition (if any) makes Per f itself representative.
Representativity representativity_certificate(const PiecewiseMonotoneMap& map,
                                              const MapValidationReport& report);

}  // namespace dynzeta

#endif  // DYNZETA_PERIODIC_HPP
