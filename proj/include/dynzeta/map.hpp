#ifndef DYNZETA_MAP_HPP
#define DYNZETA_MAP_HPP

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dynzeta {

using cplx = std::complex<double>;

/// Three-valued answer for checks that may be undecidable at this scope.
enum class TriState { yes, no, unknown };

const char* to_string(TriState t);

/// Thrown on structurally malformed inputs (unsorted breakpoints, branch
/// domain mismatch, inadmissible weights).
struct MapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BranchKind { affine, quadratic };

/// One strictly monotone piece of the map.
///
/// affine:    f(x) = slope*x + intercept
/// quadratic: f(x) = qa*x^2 + qb*x + qc, with f' nonzero on [lo, hi]
///            (vertex outside the open domain).
struct Branch {
  BranchKind kind = BranchKind::affine;
  double lo = 0.0, hi = 1.0;  // domain, assigned by the map
  double slope = 0.0, intercept = 0.0;
  double qa = 0.0, qb = 0.0, qc = 0.0;

  static Branch affine(double slope, double intercept);
  static Branch quadratic(double a, double b, double c);

  double value(double x) const;
  double derivative(double x) const;
  bool increasing() const;
  /// Endpoint images, sorted ascending. Exact range for a monotone branch.
  std::pair<double, double> range() const;
  /// Unique preimage of y in [lo, hi], closed form; empty if y is outside
  /// the branch range (beyond a 1e-12 slack).
  std::optional<double> inverse(double y) const;
  double min_abs_derivative() const;
};

/// Continuous interval map on [0,1], strictly monotone on each
/// J_i = [a_{i-1}, a_i].  Branch indices are 0-based in this API; itinerary
/// symbols (symbolic module) are printed 1-based.
///
/// Tie rule: a point equal to an interior breakpoint belongs to the
/// lower-index branch.  The rule is applied consistently everywhere
/// (evaluation, itineraries, weight lookup).
class PiecewiseMonotoneMap {
 public:
  /// Throws MapError on structural defects: breakpoints not strictly
  /// increasing, endpoints not 0 and 1, or branch count mismatch.
  PiecewiseMonotoneMap(std::vector<double> breakpoints,
                       std::vector<Branch> branches);

  int branch_count() const { return static_cast<int>(branches_.size()); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const Branch& branch(int i) const { return branches_[i]; }
  double interval_lo(int i) const { return breakpoints_[i]; }
  double interval_hi(int i) const { return breakpoints_[i + 1]; }

  /// Branch index of x under the global tie rule. Throws MapError if x is
  /// outside [0,1].
  int branch_index(double x) const;

  bool all_affine() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<Branch> branches_;
};

/// f(x), clamped into [0,1]. At an interior breakpoint the lower-index
/// branch value is returned (the adjacent branches agree within 1e-12 on a
/// validated map).
double eval_map(const PiecewiseMonotoneMap& map, double x);

/// Unique x in J_i with f(x) = y, or empty if y is not in the branch range.
std::optional<double> branch_inverse(const PiecewiseMonotoneMap& map, int i,
                                     double y);

enum class WeightKind { piecewise_constant, piecewise_affine, reciprocal_derivative };

/// Bounded-variation weight g multiplied along orbits.
///
/// piecewise_constant:    complex values on the cells of its own grid
///                        (the map partition or a finer one); cell lookup
///                        follows the global tie rule.
/// piecewise_affine:      complex nodal values, linearly interpolated.
/// reciprocal_derivative: g = scale / |f'|, real scale; admissible only
///                        when min |f'| >= 1e-9 over all branches.
class Weight {
 public:
  static Weight constant(cplx value);
  static Weight piecewise_constant(std::vector<double> nodes,
                                   std::vector<cplx> values);
  /// Piecewise-constant with one value per partition interval J_i.
  static Weight per_interval(const PiecewiseMonotoneMap& map,
                             std::vector<cplx> values);
  static Weight piecewise_affine(std::vector<double> nodes,
                                 std::vector<cplx> values);
  static Weight reciprocal_derivative(double scale);

  WeightKind kind() const { return kind_; }
  double scale() const { return scale_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<cplx>& values() const { return values_; }

  cplx value(const PiecewiseMonotoneMap& map, double x) const;

  /// Exact sup of |g| over [lo, hi] (per-kind closed form).
  double abs_sup_on(const PiecewiseMonotoneMap& map, double lo, double hi) const;

  /// Total variation of g over [0,1], exact per kind.
  double total_variation(const PiecewiseMonotoneMap& map) const;

  /// True when g is real-valued and >= 0 everywhere.
  bool nonnegative_real() const;

  /// True when g is constant on each partition interval J_i.
  bool constant_on_partition(const PiecewiseMonotoneMap& map) const;
  /// The per-J_i values; requires constant_on_partition.
  std::vector<cplx> partition_values(const PiecewiseMonotoneMap& map) const;

 private:
  Weight() = default;
  WeightKind kind_ = WeightKind::piecewise_constant;
  std::vector<double> nodes_;   // grid for pc / pw-affine
  std::vector<cplx> values_;    // cell values (pc) or nodal values (affine)
  double scale_ = 1.0;          // reciprocal_derivative
};

/// Throws MapError when the weight is not bounded variation for this map
/// (reciprocal_derivative with min |f'| < 1e-9).
void check_weight_admissible(const PiecewiseMonotoneMap& map, const Weight& w);

/// prod_{k=0}^{m-1} g(f^k x) with the global tie rule. Falls back to
/// log-magnitude + phase accumulation once |product| exceeds 1e100.
cplx orbit_weight_product(const PiecewiseMonotoneMap& map, const Weight& w,
                          double x, int m);

struct MapValidationReport {
  std::vector<double> continuity_residuals;  // one per interior breakpoint
  bool monotone_ok = false;
  bool into_ok = false;
  TriState schwarzian_negative = TriState::unknown;
  TriState slope_resonance_free = TriState::unknown;
  TriState generating = TriState::unknown;

  bool continuity_ok() const;
  /// All structural invariants hold (continuity, monotonicity, f(X) in X).
  bool ok() const { return continuity_ok() && monotone_ok && into_ok; }
};

/// Sign certificate for Sf = f'''/f' - (3/2)(f''/f')^2 on every branch.
/// Quadratic branches give Sf = -(3/2)(f''/f')^2 < 0 in closed form; affine
/// branches give Sf = 0, hence "no".
TriState schwarzian_check(const PiecewiseMonotoneMap& map);

struct SlopeResonanceResult {
  bool found = false;
  std::vector<int> exponents;  // witness, per branch, when found
  int bound = 0;               // searched total exponent <= bound
};

/// Exhaustive search for prod sigma_i^{m_i} = 1 with m_i >= 0 and
/// 0 < sum m_i <= max_total_exponent (<= 64). Magnitude within 1e-12 and
/// sign consistency are both required of a witness.
SlopeResonanceResult slope_resonance_check(const PiecewiseMonotoneMap& map,
                                           int max_total_exponent);

/// Runs every invariant check and fills the certificate tri-states.
/// The generating certificate comes from the symbolic module's probe.
MapValidationReport validate_map(const PiecewiseMonotoneMap& map,
                                 const Weight& w);

}  // namespace dynzeta

#endif  // DYNZETA_MAP_HPP
