#ifndef DYNZETA_CONFIG_HPP
#define DYNZETA_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "dynzeta/map.hpp"

namespace dynzeta {

/// Config or schema problem; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  PiecewiseMonotoneMap map;
  Weight weight;
  int order = 14;
  int ulam_bins = 512;
  double margin = 0.05;
  std::optional<double> tolerance;  // B-K matching tolerance override
  std::string config_text;          // original document, hashed into reports
};

/// Parses a JSON config document:
///   {"map": {"breakpoints": [...], "branches": [...]},
///    "weight": {"kind": ..., ...},
///    "run": {"order": M, "ulam_bins": n, "margin": x, "tolerance": t}}
/// Unknown keys are rejected; defaults: order 14, ulam_bins 512,
/// margin 0.05. Structural map errors and inadmissible weights are
/// reported as ConfigError.
RunConfig parse_config(const std::string& text);

}  // namespace dynzeta

#endif  // DYNZETA_CONFIG_HPP
