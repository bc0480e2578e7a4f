#include "dynzeta/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace dynzeta {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 5-point Gauss-Legendre on [-1, 1].
constexpr double kGlNode[5] = {-0.906179845938664, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.906179845938664};
constexpr double kGlWeight[5] = {0.23692688505618908, 0.47862867049936647,
                                 0.5688888888888889, 0.47862867049936647,
                                 0.23692688505618908};
}  // namespace

TransferMatrix exact_transfer_matrix(const TransitionStructure& ts,
                                     const std::vector<cplx>& g_values) {
  if (static_cast<int>(g_values.size()) != ts.n)
    throw MapError("exact transfer matrix needs one weight value per interval");
  TransferMatrix tm;
  tm.kind = TransferMatrix::Kind::exact_markov;
  tm.entries = Eigen::MatrixXcd::Zero(ts.n, ts.n);
  for (int i = 0; i < ts.n; ++i)
    for (int j = 0; j < ts.n; ++j)
      if (ts.t[i][j]) tm.entries(j, i) = g_values[i];
  return tm;
}

namespace {

// integral of g(y) |f'(y)| dy over [s0, s1] inside one branch.
cplx segment_integral(const PiecewiseMonotoneMap& map, const Weight& w,
                      const Branch& b, double s0, double s1) {
  if (b.kind == BranchKind::affine &&
      w.kind() == WeightKind::piecewise_constant) {
    return w.value(map, 0.5 * (s0 + s1)) * std::abs(b.slope) * (s1 - s0);
  }
  const double half = 0.5 * (s1 - s0);
  const double mid = 0.5 * (s0 + s1);
  cplx acc(0.0, 0.0);
  for (int q = 0; q < 5; ++q) {
    const double y = mid + half * kGlNode[q];
    acc += kGlWeight[q] * w.value(map, y) * std::abs(b.derivative(y));
  }
  return acc * half;
}

cplx piecewise_integral(const PiecewiseMonotoneMap& map, const Weight& w,
                        const Branch& b, double p, double q) {
  // Split at weight grid nodes so every segment has a smooth integrand.
  std::vector<double> cuts{p};
  for (double node : w.nodes())
    if (node > p && node < q) cuts.push_back(node);
  cuts.push_back(q);
  std::sort(cuts.begin(), cuts.end());
  cplx acc(0.0, 0.0);
  for (std::size_t s = 1; s < cuts.size(); ++s)
    acc += segment_integral(map, w, b, cuts[s - 1], cuts[s]);
  return acc;
}

}  // namespace

TransferMatrix ulam_matrix(const PiecewiseMonotoneMap& map, const Weight& w,
                           int bins) {
  if (bins < 16 || bins > 8192 || (bins & (bins - 1)) != 0)
    throw MapError("ulam bins must be a power of two in [16, 8192]");
  check_weight_admissible(map, w);
  const double n = bins;
  TransferMatrix tm;
  tm.kind = TransferMatrix::Kind::ulam;
  tm.ulam_bins = bins;
  tm.entries = Eigen::MatrixXcd::Zero(bins, bins);

  for (int k = 0; k < bins; ++k) {
    const double klo = k / n, khi = (k + 1) / n;
    for (int bi = 0; bi < map.branch_count(); ++bi) {
      const Branch& b = map.branch(bi);
      const double dlo = std::max(klo, b.lo), dhi = std::min(khi, b.hi);
      if (dlo >= dhi) continue;
      double u = b.value(dlo), v = b.value(dhi);
      if (u > v) std::swap(u, v);
      u = std::clamp(u, 0.0, 1.0);
      v = std::clamp(v, 0.0, 1.0);
      const int l0 = std::clamp(static_cast<int>(std::floor(u * n)), 0, bins - 1);
      const int l1 = std::clamp(static_cast<int>(std::floor(v * n)), 0, bins - 1);
      for (int l = l0; l <= l1; ++l) {
        const double ylo = std::max(u, l / n), yhi = std::min(v, (l + 1) / n);
        if (ylo >= yhi) continue;
        auto pa = b.inverse(ylo), pb = b.inverse(yhi);
        if (!pa || !pb) continue;
        double p = *pa, q = *pb;
        if (p > q) std::swap(p, q);
        p = std::clamp(p, dlo, dhi);
        q = std::clamp(q, dlo, dhi);
        if (p >= q) continue;
        tm.entries(l, k) += n * piecewise_integral(map, w, b, p, q);
      }
    }
  }
  return tm;
}

SpectrumReport eigen_spectrum(const TransferMatrix& tm) {
  const int n = static_cast<int>(tm.entries.rows());
  if (n > 8192) throw MapError("transfer matrix order exceeds 8192");
  SpectrumReport report;
  report.kind = tm.kind == TransferMatrix::Kind::exact_markov ? "exact-markov"
                                                              : "ulam";
  const bool real_matrix = (tm.entries.imag().cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXcd eig;
  if (real_matrix) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(tm.entries.real(), false);
    report.converged = solver.info() == Eigen::Success;
    eig = solver.eigenvalues();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(tm.entries, false);
    report.converged = solver.info() == Eigen::Success;
    eig = solver.eigenvalues();
  }
  report.eigenvalues.assign(eig.data(), eig.data() + eig.size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const cplx& a, const cplx& b) {
              if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });
  report.spectral_radius =
      report.eigenvalues.empty() ? 0.0 : std::abs(report.eigenvalues.front());
  return report;
}

void mark_dominant(SpectrumReport& report, double theta, double margin) {
  report.theta = theta;
  report.margin = margin;
  report.dominant_above_theta.clear();
  for (const cplx& ev : report.eigenvalues)
    if (std::abs(ev) > theta * (1.0 + margin))
      report.dominant_above_theta.push_back(ev);
}

namespace {

// Maximum cycle mean of log|g_i| over the transition graph (Karp, with
// every vertex as a source).
double max_cycle_mean(const TransitionStructure& ts,
                      const std::vector<double>& vertex_log) {
  const int n = ts.n;
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, kNegInf));
  for (int v = 0; v < n; ++v)
    if (vertex_log[v] > kNegInf) d[0][v] = 0.0;
  for (int k = 1; k <= n; ++k)
    for (int u = 0; u < n; ++u) {
      if (d[k - 1][u] == kNegInf || vertex_log[u] == kNegInf) continue;
      for (int v = 0; v < n; ++v) {
        if (!ts.t[u][v] || vertex_log[v] == kNegInf) continue;
        d[k][v] = std::max(d[k][v], d[k - 1][u] + vertex_log[u]);
      }
    }
  double best = kNegInf;
  for (int v = 0; v < n; ++v) {
    if (d[n][v] == kNegInf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      if (d[k][v] == kNegInf) continue;
      worst = std::min(worst, (d[n][v] - d[k][v]) / (n - k));
    }
    best = std::max(best, worst);
  }
  return best;
}

// Max over length-m paths of the summed vertex logs, for the s_m report.
std::vector<double> path_maxima(const TransitionStructure& ts,
                                const std::vector<double>& vertex_log, int m_cap) {
  const int n = ts.n;
  std::vector<double> ending(n, 0.0);
  std::vector<double> s;
  for (int m = 1; m <= m_cap; ++m) {
    // Walks of m vertices: each step multiplies by the vertex being left.
    std::vector<double> nxt(n, kNegInf);
    if (m == 1) {
      for (int v = 0; v < n; ++v) nxt[v] = vertex_log[v];
    } else {
      for (int u = 0; u < n; ++u) {
        if (ending[u] == kNegInf) continue;
        for (int v = 0; v < n; ++v)
          if (ts.t[u][v])
            nxt[v] = std::max(nxt[v], ending[u] + vertex_log[v]);
      }
    }
    ending = std::move(nxt);
    double sm = kNegInf;
    for (int v = 0; v < n; ++v) sm = std::max(sm, ending[v]);
    s.push_back(sm);
  }
  return s;
}

}  // namespace

ThetaEstimate theta_estimate(const PiecewiseMonotoneMap& map, const Weight& w,
                             int m_cap) {
  if (m_cap < 1) throw MapError("theta estimate needs m_cap >= 1");
  ThetaEstimate est;

  const auto ts = detect_markov(map);
  if (ts && w.constant_on_partition(map)) {
    est.method = "markov-cycle-mean";
    const auto g = w.partition_values(map);
    std::vector<double> vlog(ts->n);
    for (int i = 0; i < ts->n; ++i) {
      const double a = std::abs(g[i]);
      vlog[i] = a > 0.0 ? std::log(a) : kNegInf;
    }
    const double mean = max_cycle_mean(*ts, vlog);
    est.value = mean == kNegInf ? 0.0 : std::exp(mean);
    est.s_sequence = path_maxima(*ts, vlog, m_cap);
    return est;
  }

  est.method = "cylinder-sup";
  std::vector<Cylinder> level;
  for (int m = 1; m <= m_cap; ++m) {
    level = (m == 1) ? refine_cylinders(map, 1) : refine_step(map, level);
    if (level.size() > 200000) break;
    double sm = kNegInf;
    for (const Cylinder& cyl : level) {
      double u = cyl.lo, v = cyl.hi;
      double acc = 0.0;
      bool zero = false;
      for (int k = 0; k < m; ++k) {
        const double sup = w.abs_sup_on(map, u, v);
        if (sup <= 0.0) {
          zero = true;
          break;
        }
        acc += std::log(sup);
        if (k + 1 < m) {
          const Branch& b = map.branch(cyl.word.symbols[k] - 1);
          double nu = b.value(std::clamp(u, b.lo, b.hi));
          double nv = b.value(std::clamp(v, b.lo, b.hi));
          if (nu > nv) std::swap(nu, nv);
          u = nu;
          v = nv;
        }
      }
      if (!zero) sm = std::max(sm, acc);
    }
    est.s_sequence.push_back(sm);
  }

  // Fekete-style extrapolation: least-squares slope of s_m over the top
  // half of the finite entries.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < est.s_sequence.size(); ++i)
    if (est.s_sequence[i] > kNegInf)
      pts.emplace_back(static_cast<double>(i + 1), est.s_sequence[i]);
  if (pts.empty()) {
    est.value = 0.0;
    return est;
  }
  const std::size_t from = pts.size() / 2;
  const std::size_t count = pts.size() - from;
  if (count < 2) {
    est.value = std::exp(pts.back().second / pts.back().first);
    return est;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = from; i < pts.size(); ++i) {
    sx += pts[i].first;
    sy += pts[i].second;
    sxx += pts[i].first * pts[i].first;
    sxy += pts[i].first * pts[i].second;
  }
  const double nn = static_cast<double>(count);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  est.value = std::exp(slope);
  return est;
}

const char* to_string(BkReport::Verdict v) {
  switch (v) {
    case BkReport::Verdict::match: return "match";
    case BkReport::Verdict::mismatch: return "mismatch";
    default: return "no testable pairs";
  }
}

BkReport bk_crosscheck(const ZetaResult& zeta, const SpectrumReport& spectrum,
                       double margin, double tolerance) {
  BkReport report;
  report.tolerance = tolerance;
  report.margin = margin;

  std::vector<cplx> inv_zeros;
  for (const Zero& z : zeta.zeros) {
    if (z.unstable) continue;
    for (int k = 0; k < z.multiplicity; ++k)
      inv_zeros.push_back(cplx(1.0, 0.0) / z.location);
  }
  std::vector<cplx> eigs;
  for (const cplx& ev : spectrum.eigenvalues)
    if (std::abs(ev) > spectrum.theta * (1.0 + margin)) eigs.push_back(ev);

  if (inv_zeros.empty() && eigs.empty()) {
    report.verdict = BkReport::Verdict::no_testable_pairs;
    return report;
  }

  while (!inv_zeros.empty() && !eigs.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < inv_zeros.size(); ++i)
      for (std::size_t j = 0; j < eigs.size(); ++j) {
        const double dist = std::abs(inv_zeros[i] - eigs[j]);
        if (dist < best) {
          best = dist;
          bi = i;
          bj = j;
        }
      }
    if (best > tolerance) break;
    report.pairs.push_back({inv_zeros[bi], eigs[bj], best});
    inv_zeros.erase(inv_zeros.begin() + bi);
    eigs.erase(eigs.begin() + bj);
  }
  report.unmatched_zero_reciprocals = inv_zeros;
  report.unmatched_eigenvalues = eigs;
  report.verdict = (inv_zeros.empty() && eigs.empty())
                       ? BkReport::Verdict::match
                       : BkReport::Verdict::mismatch;
  return report;
}

}  // namespace dynzeta
