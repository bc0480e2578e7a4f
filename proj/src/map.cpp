#include "dynzeta/map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynzeta {

namespace {
constexpr double kContinuityTol = 1e-12;
constexpr double kInverseSlack = 1e-12;
constexpr double kMinDerivative = 1e-9;  // reciprocal-derivative admissibility
}  // namespace

const char* to_string(TriState t) {
  switch (t) {
    case TriState::yes: return "yes";
    case TriState::no: return "no";
    default: return "unknown";
  }
}

Branch Branch::affine(double slope, double intercept) {
  Branch b;
  b.kind = BranchKind::affine;
  b.slope = slope;
  b.intercept = intercept;
  return b;
}

Branch Branch::quadratic(double a, double bq, double c) {
  Branch b;
  b.kind = BranchKind::quadratic;
  b.qa = a;
  b.qb = bq;
  b.qc = c;
  return b;
}

double Branch::value(double x) const {
  if (kind == BranchKind::affine) return slope * x + intercept;
  return (qa * x + qb) * x + qc;
}

double Branch::derivative(double x) const {
  if (kind == BranchKind::affine) return slope;
  return 2.0 * qa * x + qb;
}

bool Branch::increasing() const {
  return derivative(0.5 * (lo + hi)) > 0.0;
}

std::pair<double, double> Branch::range() const {
  double u = value(lo), v = value(hi);
  if (u > v) std::swap(u, v);
  return {u, v};
}

std::optional<double> Branch::inverse(double y) const {
  auto [rlo, rhi] = range();
  if (y < rlo - kInverseSlack || y > rhi + kInverseSlack) return std::nullopt;
  y = std::clamp(y, rlo, rhi);
  double x;
  if (kind == BranchKind::affine) {
    x = (y - intercept) / slope;
  } else {
    // Stable quadratic formula; the in-domain root is unique because the
    // derivative keeps its sign on [lo, hi].
    const double disc = qb * qb - 4.0 * qa * (qc - y);
    const double s = std::sqrt(std::max(disc, 0.0));
    const double q = -0.5 * (qb + std::copysign(s, qb));
    double x1 = q / qa;
    double x2 = (q != 0.0) ? (qc - y) / q : x1;
    const double mid = 0.5 * (lo + hi);
    const bool ok1 = x1 >= lo - 1e-9 && x1 <= hi + 1e-9;
    const bool ok2 = x2 >= lo - 1e-9 && x2 <= hi + 1e-9;
    if (ok1 && ok2)
      x = std::abs(x1 - mid) <= std::abs(x2 - mid) ? x1 : x2;
    else if (ok1)
      x = x1;
    else if (ok2)
      x = x2;
    else
      return std::nullopt;
  }
  return std::clamp(x, lo, hi);
}

double Branch::min_abs_derivative() const {
  if (kind == BranchKind::affine) return std::abs(slope);
  // f' is affine, so |f'| attains its minimum at a domain endpoint as long
  // as the vertex lies outside (guaranteed for a valid branch).
  return std::min(std::abs(derivative(lo)), std::abs(derivative(hi)));
}

PiecewiseMonotoneMap::PiecewiseMonotoneMap(std::vector<double> breakpoints,
                                           std::vector<Branch> branches)
    : breakpoints_(std::move(breakpoints)), branches_(std::move(branches)) {
  if (breakpoints_.size() < 2) throw MapError("need at least two breakpoints");
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
    throw MapError("breakpoints must start at 0 and end at 1");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i - 1] < breakpoints_[i]))
      throw MapError("breakpoints not increasing");
  if (branches_.size() + 1 != breakpoints_.size())
    throw MapError("branch count does not match breakpoint count");
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    branches_[i].lo = breakpoints_[i];
    branches_[i].hi = breakpoints_[i + 1];
    const Branch& b = branches_[i];
    if (b.kind == BranchKind::affine) {
      if (b.slope == 0.0) throw MapError("affine branch with zero slope");
    } else {
      if (b.qa == 0.0)
        throw MapError("quadratic branch with zero leading coefficient");
      const double vertex = -b.qb / (2.0 * b.qa);
      if (vertex > b.lo && vertex < b.hi)
        throw MapError("quadratic branch has vanishing derivative inside its domain");
    }
  }
}

int PiecewiseMonotoneMap::branch_index(double x) const {
  if (x < 0.0 || x > 1.0) throw MapError("point outside [0,1]");
  // First i with x <= a_{i+1}: interior breakpoints go to the lower branch.
  auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), x);
  return static_cast<int>(it - (breakpoints_.begin() + 1));
}

bool PiecewiseMonotoneMap::all_affine() const {
  return std::all_of(branches_.begin(), branches_.end(), [](const Branch& b) {
    return b.kind == BranchKind::affine;
  });
}

double eval_map(const PiecewiseMonotoneMap& map, double x) {
  const Branch& b = map.branch(map.branch_index(x));
  return std::clamp(b.value(x), 0.0, 1.0);
}

std::optional<double> branch_inverse(const PiecewiseMonotoneMap& map, int i,
                                     double y) {
  return map.branch(i).inverse(y);
}

Weight Weight::constant(cplx value) {
  Weight w;
  w.kind_ = WeightKind::piecewise_constant;
  w.nodes_ = {0.0, 1.0};
  w.values_ = {value};
  return w;
}

Weight Weight::piecewise_constant(std::vector<double> nodes,
                                  std::vector<cplx> values) {
  if (nodes.size() < 2 || nodes.front() != 0.0 || nodes.back() != 1.0)
    throw MapError("weight grid must span [0,1]");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i - 1] < nodes[i])) throw MapError("weight grid not increasing");
  if (values.size() + 1 != nodes.size())
    throw MapError("piecewise-constant weight needs one value per cell");
  Weight w;
  w.kind_ = WeightKind::piecewise_constant;
  w.nodes_ = std::move(nodes);
  w.values_ = std::move(values);
  return w;
}

Weight Weight::per_interval(const PiecewiseMonotoneMap& map,
                            std::vector<cplx> values) {
  if (static_cast<int>(values.size()) != map.branch_count())
    throw MapError("per-interval weight needs one value per branch");
  return piecewise_constant(map.breakpoints(), std::move(values));
}

Weight Weight::piecewise_affine(std::vector<double> nodes,
                                std::vector<cplx> values) {
  if (nodes.size() < 2 || nodes.front() != 0.0 || nodes.back() != 1.0)
    throw MapError("weight grid must span [0,1]");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i - 1] < nodes[i])) throw MapError("weight grid not increasing");
  if (values.size() != nodes.size())
    throw MapError("piecewise-affine weight needs one value per node");
  Weight w;
  w.kind_ = WeightKind::piecewise_affine;
  w.nodes_ = std::move(nodes);
  w.values_ = std::move(values);
  return w;
}

Weight Weight::reciprocal_derivative(double scale) {
  Weight w;
  w.kind_ = WeightKind::reciprocal_derivative;
  w.scale_ = scale;
  return w;
}

namespace {
// Cell of x in a grid under the global tie rule (interior node -> lower cell).
int cell_index(const std::vector<double>& nodes, double x) {
  auto it = std::lower_bound(nodes.begin() + 1, nodes.end(), x);
  int k = static_cast<int>(it - (nodes.begin() + 1));
  return std::min(k, static_cast<int>(nodes.size()) - 2);
}
}  // namespace

cplx Weight::value(const PiecewiseMonotoneMap& map, double x) const {
  switch (kind_) {
    case WeightKind::piecewise_constant:
      return values_[cell_index(nodes_, x)];
    case WeightKind::piecewise_affine: {
      int k = cell_index(nodes_, x);
      const double t = (x - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
      return values_[k] + t * (values_[k + 1] - values_[k]);
    }
    case WeightKind::reciprocal_derivative: {
      const Branch& b = map.branch(map.branch_index(x));
      return cplx(scale_ / std::abs(b.derivative(x)), 0.0);
    }
  }
  return cplx(0.0, 0.0);
}

double Weight::abs_sup_on(const PiecewiseMonotoneMap& map, double lo,
                          double hi) const {
  switch (kind_) {
    case WeightKind::piecewise_constant: {
      const int k0 = cell_index(nodes_, lo);
      const int k1 = cell_index(nodes_, hi);
      double s = 0.0;
      for (int k = k0; k <= k1; ++k) s = std::max(s, std::abs(values_[k]));
      return s;
    }
    case WeightKind::piecewise_affine: {
      // |g| is convex on each segment, so the sup sits at lo, hi or an
      // interior node.
      double s = std::max(std::abs(value(map, lo)), std::abs(value(map, hi)));
      for (std::size_t k = 0; k < nodes_.size(); ++k)
        if (nodes_[k] > lo && nodes_[k] < hi)
          s = std::max(s, std::abs(values_[k]));
      return s;
    }
    case WeightKind::reciprocal_derivative: {
      // sup c/|f'| = c / min |f'|; |f'| is monotone on each branch piece.
      double dmin = std::numeric_limits<double>::infinity();
      const auto& bp = map.breakpoints();
      for (int i = 0; i < map.branch_count(); ++i) {
        const double plo = std::max(lo, bp[i]);
        const double phi = std::min(hi, bp[i + 1]);
        if (plo > phi) continue;
        const Branch& b = map.branch(i);
        dmin = std::min({dmin, std::abs(b.derivative(plo)),
                         std::abs(b.derivative(phi))});
      }
      return std::abs(scale_) / dmin;
    }
  }
  return 0.0;
}

double Weight::total_variation(const PiecewiseMonotoneMap& map) const {
  switch (kind_) {
    case WeightKind::piecewise_constant: {
      double tv = 0.0;
      for (std::size_t k = 1; k < values_.size(); ++k)
        tv += std::abs(values_[k] - values_[k - 1]);
      return tv;
    }
    case WeightKind::piecewise_affine: {
      double tv = 0.0;
      for (std::size_t k = 1; k < values_.size(); ++k)
        tv += std::abs(values_[k] - values_[k - 1]);
      return tv;
    }
    case WeightKind::reciprocal_derivative: {
      // 1/|f'| is monotone on each branch; add the jumps at breakpoints.
      double tv = 0.0;
      double prev = 0.0;
      for (int i = 0; i < map.branch_count(); ++i) {
        const Branch& b = map.branch(i);
        const double glo = std::abs(scale_) / std::abs(b.derivative(b.lo));
        const double ghi = std::abs(scale_) / std::abs(b.derivative(b.hi));
        if (i > 0) tv += std::abs(glo - prev);
        tv += std::abs(ghi - glo);
        prev = ghi;
      }
      return tv;
    }
  }
  return 0.0;
}

bool Weight::nonnegative_real() const {
  if (kind_ == WeightKind::reciprocal_derivative) return scale_ >= 0.0;
  for (const cplx& v : values_)
    if (v.imag() != 0.0 || v.real() < 0.0) return false;
  return true;
}

bool Weight::constant_on_partition(const PiecewiseMonotoneMap& map) const {
  if (kind_ != WeightKind::piecewise_constant) return false;
  const auto& bp = map.breakpoints();
  for (int i = 0; i < map.branch_count(); ++i) {
    const int k0 = cell_index(nodes_, bp[i]);
    // Cells whose interior meets the interior of J_i.
    for (std::size_t k = k0; k + 1 < nodes_.size() && nodes_[k] < bp[i + 1]; ++k)
      if (nodes_[k + 1] > bp[i] && values_[k] != values_[k0]) return false;
  }
  return true;
}

std::vector<cplx> Weight::partition_values(const PiecewiseMonotoneMap& map) const {
  std::vector<cplx> out;
  out.reserve(map.branch_count());
  for (int i = 0; i < map.branch_count(); ++i) {
    const double mid = 0.5 * (map.interval_lo(i) + map.interval_hi(i));
    out.push_back(value(map, mid));
  }
  return out;
}

void check_weight_admissible(const PiecewiseMonotoneMap& map, const Weight& w) {
  if (w.kind() != WeightKind::reciprocal_derivative) return;
  for (int i = 0; i < map.branch_count(); ++i)
    if (map.branch(i).min_abs_derivative() < kMinDerivative)
      throw MapError("weight not bounded variation: |f'| vanishes");
}

cplx orbit_weight_product(const PiecewiseMonotoneMap& map, const Weight& w,
                          double x, int m) {
  cplx prod(1.0, 0.0);
  bool log_mode = false;
  double log_mag = 0.0, phase = 0.0;
  for (int k = 0; k < m; ++k) {
    const cplx g = w.value(map, x);
    if (!log_mode) {
      prod *= g;
      if (std::abs(prod) > 1e100) {
        log_mode = true;
        log_mag = std::log(std::abs(prod));
        phase = std::arg(prod);
      }
    } else {
      log_mag += std::log(std::abs(g));
      phase += std::arg(g);
    }
    if (k + 1 < m) x = eval_map(map, x);
  }
  if (!log_mode) return prod;
  return std::polar(std::exp(log_mag), phase);
}

bool MapValidationReport::continuity_ok() const {
  return std::all_of(continuity_residuals.begin(), continuity_residuals.end(),
                     [](double r) { return r <= kContinuityTol; });
}

TriState schwarzian_check(const PiecewiseMonotoneMap& map) {
  // Sf = -(3/2)(f''/f')^2 < 0 for every quadratic branch; Sf = 0 for affine.
  for (int i = 0; i < map.branch_count(); ++i)
    if (map.branch(i).kind == BranchKind::affine) return TriState::no;
  return TriState::yes;
}

namespace {

struct ResonanceSearch {
  const std::vector<double>& log_abs;   // log |sigma_i|
  const std::vector<int>& neg;          // 1 if sigma_i < 0
  const std::vector<double>& abs_slope;
  int bound;
  std::vector<int> exponents;
  std::vector<double> tail_min, tail_max;  // min/max log over slots i..N-1

  bool verify() const {
    int neg_count = 0;
    double prod = 1.0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      if (exponents[i] == 0) continue;
      prod *= std::pow(abs_slope[i], exponents[i]);
      neg_count += neg[i] * exponents[i];
    }
    return neg_count % 2 == 0 && std::abs(prod - 1.0) <= 1e-12;
  }

  bool search(std::size_t i, int used, double log_sum) {
    if (i == exponents.size()) {
      return used > 0 && std::abs(log_sum) <= 1e-11 && verify();
    }
    const int rem = bound - used;
    const double reach_lo = log_sum + std::min(0.0, rem * tail_min[i]);
    const double reach_hi = log_sum + std::max(0.0, rem * tail_max[i]);
    if (reach_lo > 1e-11 || reach_hi < -1e-11) return false;
    for (int e = 0; e <= rem; ++e) {
      exponents[i] = e;
      if (search(i + 1, used + e, log_sum + e * log_abs[i])) return true;
    }
    exponents[i] = 0;
    return false;
  }
};

}  // namespace

SlopeResonanceResult slope_resonance_check(const PiecewiseMonotoneMap& map,
                                           int max_total_exponent) {
  if (!map.all_affine())
    throw MapError("slope resonance check requires an all-affine map");
  if (max_total_exponent < 1 || max_total_exponent > 64)
    throw MapError("resonance exponent bound must be in [1, 64]");
  const int n = map.branch_count();
  std::vector<double> log_abs(n), abs_slope(n);
  std::vector<int> neg(n);
  for (int i = 0; i < n; ++i) {
    abs_slope[i] = std::abs(map.branch(i).slope);
    log_abs[i] = std::log(abs_slope[i]);
    neg[i] = map.branch(i).slope < 0.0 ? 1 : 0;
  }
  SlopeResonanceResult result;
  result.bound = max_total_exponent;
  ResonanceSearch s{log_abs, neg, abs_slope, 0, std::vector<int>(n, 0), {}, {}};
  s.tail_min.assign(n, 0.0);
  s.tail_max.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    s.tail_min[i] = log_abs[i];
    s.tail_max[i] = log_abs[i];
    if (i + 1 < n) {
      s.tail_min[i] = std::min(s.tail_min[i], s.tail_min[i + 1]);
      s.tail_max[i] = std::max(s.tail_max[i], s.tail_max[i + 1]);
    }
  }
  // Totals ascending so the first witness has minimal total exponent.
  for (int total = 1; total <= max_total_exponent; ++total) {
    s.bound = total;
    std::fill(s.exponents.begin(), s.exponents.end(), 0);
    if (s.search(0, 0, 0.0)) {
      result.found = true;
      result.exponents = s.exponents;
      return result;
    }
  }
  return result;
}

}  // namespace dynzeta
