#include "dynzeta/periodic.hpp"

#include <algorithm>
#include <cmath>

namespace dynzeta {

const char* to_string(Representativity r) {
  switch (r) {
    case Representativity::generating: return "generating";
    case Representativity::negative_schwarzian: return "negative-schwarzian";
    case Representativity::slope_resonance_free: return "slope-resonance-free";
    default: return "constructed";
  }
}

namespace {

constexpr double kEndpointRootTol = 1e-12;
constexpr double kTangentTol = 1e-10;
constexpr double kMergeTol = 1e-11;

// f^m along the cylinder word, clamping each intermediate into the branch
// domain it is known to visit. Robust against tie-rule hops at boundaries.
double word_iterate(const PiecewiseMonotoneMap& map, const SymbolWord& word,
                    double x) {
  for (std::size_t k = 0; k < word.symbols.size(); ++k) {
    const Branch& b = map.branch(word.symbols[k] - 1);
    x = std::clamp(x, b.lo, b.hi);
    x = b.value(x);
  }
  return x;
}

double h_of(const PiecewiseMonotoneMap& map, const SymbolWord& word, double x) {
  return word_iterate(map, word, x) - x;
}

// Bisection to near machine width; returns the endpoint with smaller |h|.
double bisect_root(const PiecewiseMonotoneMap& map, const SymbolWord& word,
                   double lo, double hi, double hlo, double hhi) {
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double hm = h_of(map, word, mid);
    if (hm == 0.0) return mid;
    if ((hm > 0.0) == (hlo > 0.0)) {
      lo = mid;
      hlo = hm;
    } else {
      hi = mid;
      hhi = hm;
    }
  }
  return std::abs(hlo) <= std::abs(hhi) ? lo : hi;
}

bool word_all_affine(const PiecewiseMonotoneMap& map, const SymbolWord& word) {
  for (int s : word.symbols)
    if (map.branch(s - 1).kind != BranchKind::affine) return false;
  return true;
}

}  // namespace

FixedPointResult fixed_points_in_cylinder(const PiecewiseMonotoneMap& map,
                                          const Cylinder& cyl, int m) {
  if (cyl.word.length() != m) throw MapError("cylinder word length mismatch");
  FixedPointResult res;
  const SymbolWord& w = cyl.word;

  if (cyl.degenerate()) {
    if (std::abs(h_of(map, w, cyl.lo)) <= kTangentTol) res.points.push_back(cyl.lo);
    return res;
  }

  bool increasing = true;
  for (int s : w.symbols) increasing = (increasing == map.branch(s - 1).increasing());

  const double hlo = h_of(map, w, cyl.lo);
  const double hhi = h_of(map, w, cyl.hi);

  if (!increasing) {
    // h is strictly decreasing: at most one zero.
    if (std::abs(hlo) <= kEndpointRootTol) {
      res.points.push_back(cyl.lo);
    } else if (std::abs(hhi) <= kEndpointRootTol) {
      res.points.push_back(cyl.hi);
    } else if (hlo > 0.0 && hhi < 0.0) {
      res.points.push_back(bisect_root(map, w, cyl.lo, cyl.hi, hlo, hhi));
    }
    return res;
  }

  if (word_all_affine(map, w)) {
    double slope = 1.0;
    for (int s : w.symbols) slope *= map.branch(s - 1).slope;
    if (slope == 1.0) {
      if (hlo == 0.0) res.interval = {cyl.lo, cyl.hi};
      return res;
    }
    const double root = cyl.lo - hlo / (slope - 1.0);
    if (root >= cyl.lo - kEndpointRootTol && root <= cyl.hi + kEndpointRootTol)
      res.points.push_back(std::clamp(root, cyl.lo, cyl.hi));
    return res;
  }

  // Increasing nonlinear composite: isolate sign changes on a grid.
  constexpr int kGrid = 64;
  std::vector<double> xs(kGrid + 1), hs(kGrid + 1);
  for (int j = 0; j <= kGrid; ++j) {
    xs[j] = cyl.lo + (cyl.hi - cyl.lo) * j / kGrid;
    hs[j] = h_of(map, w, xs[j]);
  }
  std::vector<char> near_root(kGrid + 1, 0);
  for (int j = 0; j <= kGrid; ++j) {
    if (hs[j] == 0.0) {
      res.points.push_back(xs[j]);
      near_root[j] = 1;
    }
  }
  for (int j = 0; j < kGrid; ++j) {
    if (hs[j] * hs[j + 1] < 0.0) {
      res.points.push_back(bisect_root(map, w, xs[j], xs[j + 1], hs[j], hs[j + 1]));
      near_root[j] = near_root[j + 1] = 1;
    }
  }
  // Tangential double roots: |h| dips below tolerance with no sign change.
  for (int j = 1; j < kGrid; ++j) {
    if (near_root[j - 1] || near_root[j] || near_root[j + 1]) continue;
    if (std::abs(hs[j]) < kTangentTol && std::abs(hs[j]) <= std::abs(hs[j - 1]) &&
        std::abs(hs[j]) <= std::abs(hs[j + 1])) {
      // Ternary search for the minimum of |h| around the dip.
      double a = xs[j - 1], b = xs[j + 1];
      for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
        const double u = a + (b - a) / 3.0, v = b - (b - a) / 3.0;
        if (std::abs(h_of(map, w, u)) <= std::abs(h_of(map, w, v)))
          b = v;
        else
          a = u;
      }
      res.points.push_back(0.5 * (a + b));
      res.tangential = true;
      near_root[j] = 1;
    }
  }
  std::sort(res.points.begin(), res.points.end());
  // Collapse duplicates from roots landing exactly on grid nodes.
  res.points.erase(std::unique(res.points.begin(), res.points.end(),
                               [](double a, double b) {
                                 return std::abs(a - b) <= kMergeTol;
                               }),
                   res.points.end());
  return res;
}

namespace {

struct Candidate {
  double x;
  SymbolWord word;
  bool degenerate;
  bool tangential;
  bool shared_boundary;  // x sits exactly on a cylinder boundary interior to [0,1]
};

}  // namespace

RepresentativeSet build_representative_set(const PiecewiseMonotoneMap& map,
                                           int m_max, std::size_t cap) {
  if (m_max < 1 || m_max > 20) throw MapError("m_max must be in [1, 20]");
  RepresentativeSet set;
  set.m_max = m_max;
  set.by_period.resize(m_max);

  std::vector<Cylinder> level;
  for (int m = 1; m <= m_max; ++m) {
    level = (m == 1) ? refine_cylinders(map, 1, cap) : refine_step(map, level);
    if (level.size() > cap)
      throw CylinderCapError("cylinder count exceeds the configured cap");

    std::vector<Candidate> cands;
    for (const Cylinder& cyl : level) {
      FixedPointResult fp = fixed_points_in_cylinder(map, cyl, m);
      if (fp.interval) {
        const double mid = 0.5 * (fp.interval->first + fp.interval->second);
        cands.push_back({mid, cyl.word, true, false, false});
        continue;
      }
      // One record per admissible periodic word: keep the first crossing if
      // a nonlinear composite ever yields several.
      if (!fp.points.empty()) {
        const double x = fp.points.front();
        const bool shared = (x == cyl.lo && cyl.lo > 0.0) ||
                            (x == cyl.hi && cyl.hi < 1.0);
        cands.push_back({x, cyl.word, false, fp.tangential, shared});
      }
    }

    // Boundary deduplication: a fixed point on a shared cylinder boundary is
    // kept only in the cylinder whose word matches its tie-rule itinerary.
    // Candidates within kMergeTol are the same point seen from both sides.
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.x < b.x; });
    std::vector<Candidate> kept;
    for (std::size_t i = 0; i < cands.size();) {
      std::size_t j = i + 1;
      while (j < cands.size() && cands[j].x - cands[j - 1].x <= kMergeTol) ++j;
      if (j == i + 1) {
        const Candidate& c = cands[i];
        if (c.degenerate || !c.shared_boundary ||
            itinerary(map, c.x, m) == c.word)
          kept.push_back(c);
      } else {
        std::size_t pick = i;
        for (std::size_t k = i; k < j; ++k) {
          if (itinerary(map, cands[k].x, m) == cands[k].word) {
            pick = k;
            break;
          }
        }
        kept.push_back(cands[pick]);
      }
      i = j;
    }

    auto& records = set.by_period[m - 1];
    for (const Candidate& c : kept) {
      PeriodicPointRecord rec;
      rec.x = c.x;
      rec.period = m;
      rec.word = c.word;
      rec.degenerate = c.degenerate;
      rec.tangential = c.tangential;
      records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(),
              [](const PeriodicPointRecord& a, const PeriodicPointRecord& b) {
                return a.word < b.word;
              });
  }
  return set;
}

cplx record_weight_product(const PiecewiseMonotoneMap& map, const Weight& w,
                           const PeriodicPointRecord& rec) {
  if (rec.degenerate && w.constant_on_partition(map)) {
    const auto g = w.partition_values(map);
    cplx prod(1.0, 0.0);
    for (int s : rec.word.symbols) prod *= g[s - 1];
    return prod;
  }
  return orbit_weight_product(map, w, rec.x, rec.period);
}

void fill_weight_products(const PiecewiseMonotoneMap& map, const Weight& w,
                          RepresentativeSet& set) {
  for (auto& records : set.by_period)
    for (auto& rec : records) rec.weight_product = record_weight_product(map, w, rec);
}

std::vector<cplx> trace_sums(const PiecewiseMonotoneMap& map, const Weight& w,
                             const RepresentativeSet& set, int m_max) {
  if (m_max > set.m_max) throw MapError("trace sums beyond the built m_max");
  std::vector<cplx> T;
  T.reserve(m_max);
  for (int m = 1; m <= m_max; ++m) {
    cplx sum(0.0, 0.0);
    for (const auto& rec : set.period(m)) sum += record_weight_product(map, w, rec);
    T.push_back(sum);
  }
  return T;
}

Representativity representativity_certificate(const PiecewiseMonotoneMap& map,
                                              const MapValidationReport& report) {
  (void)map;
  if (report.slope_resonance_free == TriState::yes)
    return Representativity::slope_resonance_free;
  if (report.schwarzian_negative == TriState::yes)
    return Representativity::negative_schwarzian;
  if (report.generating == TriState::yes) return Representativity::generating;
  return Representativity::constructed;
}

}  // namespace dynzeta
