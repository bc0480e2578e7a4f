#include "dynzeta/series.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace dynzeta {

cplx PowerSeries::eval(cplx z) const {
  cplx acc(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

PowerSeries d_series_from_traces(const std::vector<cplx>& traces) {
  const int m = static_cast<int>(traces.size());
  PowerSeries d;
  d.c.assign(m + 1, cplx(0.0, 0.0));
  d.c[0] = cplx(1.0, 0.0);
  for (int n = 1; n <= m; ++n) {
    cplx sum(0.0, 0.0);
    for (int k = 1; k <= n; ++k) sum += traces[k - 1] * d.c[n - k];
    d.c[n] = -sum / static_cast<double>(n);
  }
  return d;
}

PowerSeries zeta_series(const PowerSeries& d) {
  if (d.c.empty() || d.c[0] != cplx(1.0, 0.0))
    throw MapError("zeta series requires d with constant term 1");
  PowerSeries z;
  z.c.assign(d.c.size(), cplx(0.0, 0.0));
  z.c[0] = cplx(1.0, 0.0);
  for (std::size_t n = 1; n < d.c.size(); ++n) {
    cplx sum(0.0, 0.0);
    for (std::size_t k = 1; k <= n; ++k) sum += d.c[k] * z.c[n - k];
    z.c[n] = -sum;
  }
  return z;
}

namespace {

// Roots of the polynomial after trimming machine-zero leading coefficients.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  double cmax = 0.0;
  for (const cplx& v : coeffs) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) return {};
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) <= 1e-14 * cmax) --deg;
  if (deg == 0) return {};

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<cplx> roots;
  roots.reserve(deg);
  for (int i = 0; i < deg; ++i) roots.push_back(solver.eigenvalues()[i]);

  // Newton polish on the full truncation.
  for (cplx& z : roots) {
    for (int it = 0; it < 12; ++it) {
      cplx p(0.0, 0.0), dp(0.0, 0.0);
      for (int k = deg; k >= 0; --k) {
        dp = dp * z + p;
        p = p * z + coeffs[k];
      }
      if (std::abs(dp) < 1e-300) break;
      const cplx step = p / dp;
      z -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
  }
  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

}  // namespace

ZetaResult find_zeros_in_disk(const PowerSeries& d, double rho) {
  if (d.order() < 4) throw MapError("zero finding needs series order >= 4");
  if (!(rho > 0.0)) throw MapError("validity radius must be positive");

  ZetaResult result;
  result.d = d;
  result.validity_radius = rho;

  const std::vector<cplx> roots = polynomial_roots(d.c);

  std::vector<cplx> lower_coeffs(d.c.begin(), d.c.end() - 2);
  const std::vector<cplx> lower_roots = polynomial_roots(lower_coeffs);

  // Cluster within 1e-6; multiplicity by cluster size.
  std::vector<std::vector<cplx>> clusters;
  for (const cplx& z : roots) {
    bool placed = false;
    for (auto& cl : clusters) {
      cplx mean(0.0, 0.0);
      for (const cplx& w : cl) mean += w;
      mean /= static_cast<double>(cl.size());
      if (std::abs(z - mean) <= 1e-6) {
        cl.push_back(z);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({z});
  }

  for (const auto& cl : clusters) {
    cplx mean(0.0, 0.0);
    for (const cplx& w : cl) mean += w;
    mean /= static_cast<double>(cl.size());
    Zero zero;
    zero.location = mean;
    zero.multiplicity = static_cast<int>(cl.size());
    zero.stability = std::numeric_limits<double>::infinity();
    for (const cplx& w : lower_roots)
      zero.stability = std::min(zero.stability, std::abs(mean - w));
    zero.unstable = !(zero.stability <= 1e-4 * rho);
    if (std::abs(mean) <= rho)
      result.zeros.push_back(zero);
    else
      result.outside.push_back(zero);
  }
  return result;
}

namespace {

// det of a small complex matrix by partial-pivot elimination.
cplx small_det(Eigen::MatrixXcd m) {
  const int n = static_cast<int>(m.rows());
  cplx det(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (m(piv, k) == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
    if (piv != k) {
      m.row(piv).swap(m.row(k));
      det = -det;
    }
    det *= m(k, k);
    for (int i = k + 1; i < n; ++i) {
      const cplx f = m(i, k) / m(k, k);
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

}  // namespace

PowerSeries markov_determinant_oracle(const TransitionStructure& ts,
                                      const std::vector<cplx>& g_values) {
  const int n = ts.n;
  if (static_cast<int>(g_values.size()) != n)
    throw MapError("determinant oracle needs one weight value per interval");

  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m(j, i) = ts.t[i][j] ? g_values[i] : cplx(0.0, 0.0);

  PowerSeries poly;
  poly.c.assign(n + 1, cplx(0.0, 0.0));
  poly.c[0] = cplx(1.0, 0.0);

  if (n <= 8) {
    // det(I - zM) = sum_k (-z)^k e_k with e_k the sum of k x k principal minors.
    std::vector<int> subset;
    for (int mask = 1; mask < (1 << n); ++mask) {
      subset.clear();
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) subset.push_back(i);
      const int k = static_cast<int>(subset.size());
      Eigen::MatrixXcd sub(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub(r, c) = m(subset[r], subset[c]);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      poly.c[k] += sign * small_det(std::move(sub));
    }
  } else {
    // Faddeev-LeVerrier: e_k from traces of the recursion matrices.
    Eigen::MatrixXcd mk = m;
    cplx ek;
    for (int k = 1; k <= n; ++k) {
      ek = mk.trace() / static_cast<double>(k);
      poly.c[k] = (k % 2 == 0 ? 1.0 : -1.0) * ek;
      if (k < n) mk = m * (mk - ek * Eigen::MatrixXcd::Identity(n, n));
    }
  }
  return poly;
}

}  // namespace dynzeta
