#ifndef DYNZETA_PIPELINE_HPP
#define DYNZETA_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "dynzeta/config.hpp"
#include "dynzeta/map.hpp"
#include "dynzeta/periodic.hpp"
#include "dynzeta/pressure.hpp"
#include "dynzeta/series.hpp"
#include "dynzeta/spectral.hpp"
#include "dynzeta/symbolic.hpp"

namespace dynzeta {

/// File-system problem while emitting reports; the CLI maps it to exit 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerifyReport {
  MapValidationReport validation;
  Representativity certificate = Representativity::constructed;
  std::string zeta_semantics;  // "zeta" or "zeta_S"
  std::optional<TransitionStructure> markov;
  std::vector<Cylinder> cylinders;  // deepest refinement level
  RepresentativeSet set;
  std::vector<cplx> traces;
  ZetaResult zeta;                  // d series, zeros, validity radius
  PowerSeries zeta_coefficients;
  std::optional<PowerSeries> determinant_oracle;
  ThetaEstimate theta;
  SpectrumReport spectrum;          // exact-markov when available, else ulam
  PressureEstimate pressure;
  BoundsReport bounds;
  BkReport bk;
  double bk_tolerance = 0.0;
  std::string config_hash;
  double wall_ms = 0.0;
};

/// Full pipeline: validate, refine, enumerate, trace sums, d series and
/// oracle, zeros, spectrum, theta, pressure, bounds, B-K crosscheck.
/// Throws MapError when the map fails validation.
VerifyReport run_verify(const RunConfig& cfg);

/// JSON rendering of the report, stable key order. Byte-identical across
/// runs of the same config except for the wall_time_ms field.
std::string report_json(const VerifyReport& report);

/// Writes report.json and/or the CSV tables (traces, cylinders, periodic
/// records, pressure sequence, plot data) into out_dir.
/// format is "json", "csv" or "both". Returns the files written.
std::vector<std::string> emit_report(const VerifyReport& report,
                                     const std::string& out_dir,
                                     const std::string& format);

/// FNV-1a 64-bit hash, hex-encoded; used for the report provenance block.
std::string fnv1a_hex(const std::string& bytes);

/// Shortest round-trip decimal rendering (used by the CSV writers).
std::string format_double(double v);

}  // namespace dynzeta

#endif  // DYNZETA_PIPELINE_HPP
