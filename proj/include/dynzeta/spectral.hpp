#ifndef DYNZETA_SPECTRAL_HPP
#define DYNZETA_SPECTRAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dynzeta/map.hpp"
#include "dynzeta/series.hpp"
#include "dynzeta/symbolic.hpp"

namespace dynzeta {

/// Finite-rank representation of the transfer operator
/// (L Phi)(x) = sum_{y: f y = x} g(y) Phi(y)
/// on coefficient vectors over a piecewise-constant basis.
struct TransferMatrix {
  enum class Kind { exact_markov, ulam };
  Kind kind = Kind::exact_markov;
  int ulam_bins = 0;  // set for the ulam kind
  Eigen::MatrixXcd entries;
};

struct SpectrumReport {
  std::string kind;                 // "exact-markov" or "ulam"
  std::vector<cplx> eigenvalues;    // descending modulus
  double spectral_radius = 0.0;
  bool converged = true;
  double theta = 0.0;               // filled by mark_dominant
  double margin = 0.0;
  std::vector<cplx> dominant_above_theta;
};

struct ThetaEstimate {
  double value = 0.0;
  std::string method;               // "markov-cycle-mean" or "cylinder-sup"
  std::vector<double> s_sequence;   // s_m = log max length-m product bound
};

/// Exact matrix M_{ji} = g_i t_{ij} on functions constant on the partition
/// intervals; exact for Markov maps with piecewise-constant weights.
TransferMatrix exact_transfer_matrix(const TransitionStructure& ts,
                                     const std::vector<cplx>& g_values);

/// Ulam discretization on n uniform bins (n a power of two in [16, 8192]):
/// M_{lk} = n * sum_b  integral over I_k cap J_b cap f_b^{-1}(I_l) of
/// g(y) |f_b'(y)| dy.  Intersections come from branch inverses; integrals
/// are exact for affine branches with piecewise-constant weights and use
/// 5-point Gauss-Legendre per smooth segment otherwise.
TransferMatrix ulam_matrix(const PiecewiseMonotoneMap& map, const Weight& w,
                           int bins);

/// Dense nonsymmetric eigensolution, eigenvalues sorted by modulus
/// descending. Non-convergence is reported, not thrown.
SpectrumReport eigen_spectrum(const TransferMatrix& tm);

/// Fills theta, margin and the dominant sublist |lambda| > theta*(1+margin).
void mark_dominant(SpectrumReport& report, double theta, double margin);

/// theta = lim sup_x |prod g(f^k x)|^{1/m}.  Markov maps with weights
/// constant on the partition get the exact value: the maximum cycle
/// geometric mean of |g_i| over the transition graph.  Otherwise s_m is the
/// log of the max over length-m cylinders of the per-step interval sup of
/// |g|, extrapolated in m (subadditive sequence).
ThetaEstimate theta_estimate(const PiecewiseMonotoneMap& map, const Weight& w,
                             int m_cap);

struct BkPair {
  cplx zero_reciprocal;
  cplx eigenvalue;
  double distance = 0.0;
};

struct BkReport {
  enum class Verdict { match, mismatch, no_testable_pairs };
  Verdict verdict = Verdict::no_testable_pairs;
  std::vector<BkPair> pairs;
  std::vector<cplx> unmatched_zero_reciprocals;
  std::vector<cplx> unmatched_eigenvalues;
  double tolerance = 0.0;
  double margin = 0.0;
};

const char* to_string(BkReport::Verdict v);

/// Greedy nearest-neighbor matching of {1/z : stable zeros, with
/// multiplicity} against {lambda : |lambda| > theta*(1+margin)}.  Match
/// requires a perfect pairing within the tolerance; anything else is a
/// reported mismatch, never an exception.
BkReport bk_crosscheck(const ZetaResult& zeta, const SpectrumReport& spectrum,
                       double margin, double tolerance);

}  // namespace dynzeta

#endif  // DYNZETA_SPECTRAL_HPP
