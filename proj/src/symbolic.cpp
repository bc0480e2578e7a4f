#include "dynzeta/symbolic.hpp"

#include <algorithm>
#include <cmath>

namespace dynzeta {

std::string SymbolWord::str() const {
  const bool wide =
      std::any_of(symbols.begin(), symbols.end(), [](int s) { return s > 9; });
  std::string out;
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    if (wide && k > 0) out += '.';
    out += std::to_string(symbols[k]);
  }
  return out;
}

static void check_cap(const PiecewiseMonotoneMap& map, int m, std::size_t cap) {
  const double n = map.branch_count();
  if (std::pow(n, m) > static_cast<double>(cap))
    throw CylinderCapError("cylinder count N^m exceeds the configured cap");
}

std::vector<Cylinder> refine_step(const PiecewiseMonotoneMap& map,
                                  const std::vector<Cylinder>& level) {
  std::vector<Cylinder> next;
  next.reserve(level.size() * map.branch_count());
  for (int i = 0; i < map.branch_count(); ++i) {
    const auto [rlo, rhi] = map.branch(i).range();
    for (const Cylinder& c : level) {
      const double ylo = std::max(rlo, c.lo);
      const double yhi = std::min(rhi, c.hi);
      if (ylo > yhi) continue;
      auto plo = branch_inverse(map, i, ylo);
      auto phi = branch_inverse(map, i, yhi);
      if (!plo || !phi) continue;
      double xlo = *plo, xhi = *phi;
      if (xlo > xhi) std::swap(xlo, xhi);
      Cylinder cyl;
      cyl.word.symbols.reserve(c.word.symbols.size() + 1);
      cyl.word.symbols.push_back(i + 1);
      cyl.word.symbols.insert(cyl.word.symbols.end(), c.word.symbols.begin(),
                              c.word.symbols.end());
      cyl.lo = xlo;
      cyl.hi = xhi;
      next.push_back(std::move(cyl));
    }
  }
  std::sort(next.begin(), next.end(),
            [](const Cylinder& a, const Cylinder& b) { return a.word < b.word; });
  return next;
}

std::vector<Cylinder> refine_cylinders(const PiecewiseMonotoneMap& map, int m,
                                       std::size_t cap) {
  if (m < 1 || m > 24) throw MapError("cylinder depth must be in [1, 24]");
  check_cap(map, m, cap);
  std::vector<Cylinder> level;
  for (int i = 0; i < map.branch_count(); ++i)
    level.push_back(Cylinder{SymbolWord{{i + 1}}, map.interval_lo(i),
                             map.interval_hi(i)});
  for (int k = 1; k < m; ++k) level = refine_step(map, level);
  return level;
}

SymbolWord itinerary(const PiecewiseMonotoneMap& map, double x, int m) {
  SymbolWord w;
  w.symbols.reserve(m);
  for (int k = 0; k < m; ++k) {
    w.symbols.push_back(map.branch_index(x) + 1);
    if (k + 1 < m) x = eval_map(map, x);
  }
  return w;
}

std::optional<TransitionStructure> detect_markov(const PiecewiseMonotoneMap& map) {
  constexpr double tol = 1e-12;
  const auto& bp = map.breakpoints();
  const int n = map.branch_count();
  auto match = [&](double v) -> int {
    for (std::size_t j = 0; j < bp.size(); ++j)
      if (std::abs(v - bp[j]) <= tol) return static_cast<int>(j);
    return -1;
  };
  TransitionStructure ts;
  ts.n = n;
  ts.t.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) {
    const auto [rlo, rhi] = map.branch(i).range();
    const int j = match(rlo), k = match(rhi);
    if (j < 0 || k < 0 || j >= k) return std::nullopt;
    for (int l = j; l < k; ++l) ts.t[i][l] = 1;
  }
  return ts;
}

bigint admissible_word_count(const TransitionStructure& ts, int m) {
  if (m < 1) throw MapError("word length must be positive");
  const int n = ts.n;
  std::vector<std::vector<bigint>> p(n, std::vector<bigint>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p[i][j] = ts.t[i][j];
  std::vector<std::vector<bigint>> acc = p;
  for (int step = 1; step < m; ++step) {
    std::vector<std::vector<bigint>> nxt(n, std::vector<bigint>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (acc[i][k] == 0) continue;
        for (int j = 0; j < n; ++j)
          if (ts.t[k][j]) nxt[i][j] += acc[i][k];
      }
    acc = std::move(nxt);
  }
  bigint trace = 0;
  for (int i = 0; i < n; ++i) trace += acc[i][i];
  return trace;
}

bool is_primitive(const TransitionStructure& ts) {
  const int n = ts.n;
  std::vector<std::vector<char>> p(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p[i][j] = ts.t[i][j] != 0;
  const int wielandt = (n - 1) * (n - 1) + 1;
  for (int step = 0; step < wielandt; ++step) {
    bool all = true;
    for (int i = 0; i < n && all; ++i)
      for (int j = 0; j < n && all; ++j) all = p[i][j];
    if (all) return true;
    std::vector<std::vector<char>> nxt(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (p[i][k])
          for (int j = 0; j < n; ++j)
            if (ts.t[k][j]) nxt[i][j] = 1;
    p = std::move(nxt);
  }
  return false;
}

TriState generating_certificate(const PiecewiseMonotoneMap& map, int max_depth,
                                std::size_t cap) {
  if (auto ts = detect_markov(map)) {
    if (map.all_affine() && is_primitive(*ts)) {
      bool expanding = true;
      for (int i = 0; i < map.branch_count(); ++i)
        expanding = expanding && std::abs(map.branch(i).slope) > 1.0;
      if (expanding) return TriState::yes;
    }
  }
  // Width probe on bare intervals (words are not needed here).
  std::vector<std::pair<double, double>> level;
  for (int i = 0; i < map.branch_count(); ++i)
    level.emplace_back(map.interval_lo(i), map.interval_hi(i));
  for (int m = 1; m <= max_depth; ++m) {
    double wmax = 0.0;
    for (const auto& [lo, hi] : level) wmax = std::max(wmax, hi - lo);
    if (wmax < 1e-9) return TriState::yes;
    if (m == max_depth) break;
    std::vector<std::pair<double, double>> next;
    next.reserve(level.size() * map.branch_count());
    for (int i = 0; i < map.branch_count(); ++i) {
      const auto [rlo, rhi] = map.branch(i).range();
      for (const auto& [clo, chi] : level) {
        const double ylo = std::max(rlo, clo);
        const double yhi = std::min(rhi, chi);
        if (ylo > yhi) continue;
        auto plo = branch_inverse(map, i, ylo);
        auto phi = branch_inverse(map, i, yhi);
        if (!plo || !phi) continue;
        next.emplace_back(std::min(*plo, *phi), std::max(*plo, *phi));
      }
    }
    if (next.size() > cap) break;
    level = std::move(next);
  }
  return TriState::unknown;
}

}  // namespace dynzeta
