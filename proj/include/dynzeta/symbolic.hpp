#ifndef DYNZETA_SYMBOLIC_HPP
#define DYNZETA_SYMBOLIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dynzeta/map.hpp"

namespace dynzeta {

using bigint = boost::multiprecision::cpp_int;

/// Itinerary word: symbols in {1..N}, printed 1-based.
struct SymbolWord {
  std::vector<int> symbols;

  int length() const { return static_cast<int>(symbols.size()); }
  /// "121" for N <= 9, dot-separated otherwise.
  std::string str() const;

  friend bool operator==(const SymbolWord&, const SymbolWord&) = default;
  friend auto operator<=>(const SymbolWord& a, const SymbolWord& b) {
    return a.symbols <=> b.symbols;
  }
};

/// Monotonicity interval of f^m together with its itinerary word.
/// Single-point cylinders (lo == hi) are retained and flagged; they arise at
/// boundary coincidences and feed the finite-set exclusions downstream.
struct Cylinder {
  SymbolWord word;
  double lo = 0.0, hi = 0.0;

  bool degenerate() const { return lo == hi; }
};

/// 0/1 transition structure of a Markov map: t[i][j] = 1 iff J_{j+1} is
/// contained in f(J_{i+1}) (indices 0-based here).
struct TransitionStructure {
  int n = 0;
  std::vector<std::vector<int>> t;
};

inline constexpr std::size_t kDefaultCylinderCap = std::size_t(1) << 22;

/// Thrown when a refinement would exceed the cylinder cap.
struct CylinderCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All length-m cylinders, words lexicographically sorted. Computed by
/// iterated pullback through branch inverses; pairwise disjoint interiors
/// covering [0,1].
std::vector<Cylinder> refine_cylinders(const PiecewiseMonotoneMap& map, int m,
                                       std::size_t cap = kDefaultCylinderCap);

/// One pullback step: length-(k+1) cylinders from length-k ones.
std::vector<Cylinder> refine_step(const PiecewiseMonotoneMap& map,
                                  const std::vector<Cylinder>& level);

/// Word of branch indices visited by x, f x, ..., f^{m-1} x under the
/// global tie rule.
SymbolWord itinerary(const PiecewiseMonotoneMap& map, double x, int m);

/// Present iff every branch image is a union of partition intervals
/// (endpoint match within 1e-12).
std::optional<TransitionStructure> detect_markov(const PiecewiseMonotoneMap& map);

/// Trace of the m-th power of the 0/1 matrix: the number of admissible
/// periodic symbol words of period m. Exact integer arithmetic.
bigint admissible_word_count(const TransitionStructure& ts, int m);

/// Some power of t is strictly positive (checked up to the Wielandt bound).
bool is_primitive(const TransitionStructure& ts);

/// Sufficient-condition probe for the generating property:
///   yes  - the maximum cylinder width drops below 1e-9 at some level
///          m <= max_depth, or the map is Markov, all-affine with every
///          |slope| > 1 and a primitive transition matrix;
///   unknown - otherwise (the property is not decidable in general).
TriState generating_certificate(const PiecewiseMonotoneMap& map,
                                int max_depth = 24,
                                std::size_t cap = kDefaultCylinderCap);

}  // namespace dynzeta

#endif  // DYNZETA_SYMBOLIC_HPP
