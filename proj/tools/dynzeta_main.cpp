#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dynzeta/pipeline.hpp"

namespace {

using namespace dynzeta;

constexpr int kExitOk = 0;
constexpr int kExitBkMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string config_path;
  std::string output_dir;
  std::string format = "json";
  int order = -1;
  int ulam_bins = -1;
  double margin = -1.0;
};

void add_common_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "JSON config document")
      ->required();
  cmd->add_option("--order", opt.order, "truncation order / depth override");
  cmd->add_option("--ulam-bins", opt.ulam_bins, "Ulam bin count override");
  cmd->add_option("--margin", opt.margin, "eigenvalue margin above theta");
  cmd->add_option("--output", opt.output_dir, "directory for report files");
  cmd->add_option("--format", opt.format, "json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}));
}

RunConfig load_config(const Options& opt) {
  RunConfig cfg = parse_config(read_file(opt.config_path));
  if (opt.order > 0) cfg.order = opt.order;
  if (opt.ulam_bins > 0) cfg.ulam_bins = opt.ulam_bins;
  if (opt.margin >= 0.0) cfg.margin = opt.margin;
  if (cfg.order < 4 || cfg.order > 20)
    throw ConfigError("order must be in [4, 20]");
  if (cfg.ulam_bins < 16 || cfg.ulam_bins > 8192 ||
      (cfg.ulam_bins & (cfg.ulam_bins - 1)) != 0)
    throw ConfigError("ulam bins must be a power of two in [16, 8192]");
  return cfg;
}

void maybe_write(const Options& opt, const char* name,
                 const std::string& content) {
  if (opt.output_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(opt.output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + opt.output_dir);
  const auto path = std::filesystem::path(opt.output_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

int cmd_validate(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const MapValidationReport report = validate_map(cfg.map, cfg.weight);
  const Representativity cert = representativity_certificate(cfg.map, report);
  std::cout << "continuity residuals:";
  for (double r : report.continuity_residuals) std::cout << " " << format_double(r);
  std::cout << "\nmonotone_ok: " << (report.monotone_ok ? "true" : "false")
            << "\ninto_ok: " << (report.into_ok ? "true" : "false")
            << "\nschwarzian_negative: " << to_string(report.schwarzian_negative)
            << "\nslope_resonance_free: " << to_string(report.slope_resonance_free)
            << "\ngenerating: " << to_string(report.generating)
            << "\ncertificate: " << to_string(cert) << "\n";
  return report.ok() ? kExitOk : kExitConfig;
}

int cmd_cylinders(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const auto cylinders = refine_cylinders(cfg.map, cfg.order);
  std::string csv = "word,lo,hi\n";
  for (const Cylinder& c : cylinders)
    csv += c.word.str() + "," + format_double(c.lo) + "," +
           format_double(c.hi) + "\n";
  maybe_write(opt, "cylinders.csv", csv);
  if (opt.output_dir.empty()) std::cout << csv;
  std::cerr << cylinders.size() << " cylinders at depth " << cfg.order << "\n";
  return kExitOk;
}

int cmd_periodic(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  RepresentativeSet set = build_representative_set(cfg.map, cfg.order);
  fill_weight_products(cfg.map, cfg.weight, set);
  std::string csv = "m,word,x,re_w,im_w,degenerate\n";
  for (const auto& recs : set.by_period)
    for (const auto& rec : recs)
      csv += std::to_string(rec.period) + "," + rec.word.str() + "," +
             format_double(rec.x) + "," +
             format_double(rec.weight_product.real()) + "," +
             format_double(rec.weight_product.imag()) + "," +
             (rec.degenerate ? "1" : "0") + "\n";
  maybe_write(opt, "periodic.csv", csv);
  if (opt.output_dir.empty()) std::cout << csv;
  return kExitOk;
}

int cmd_zeta(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const RepresentativeSet set = build_representative_set(cfg.map, cfg.order);
  const auto traces = trace_sums(cfg.map, cfg.weight, set, cfg.order);
  const PowerSeries d = d_series_from_traces(traces);
  const ThetaEstimate theta =
      theta_estimate(cfg.map, cfg.weight, std::min(cfg.order, 12));
  const double rho = theta.value > 1e-300
                         ? 0.95 / theta.value
                         : std::numeric_limits<double>::infinity();
  const ZetaResult z = find_zeros_in_disk(d, rho);
  std::cout << "d coefficients:";
  for (const cplx& c : d.c)
    std::cout << " (" << format_double(c.real()) << ","
              << format_double(c.imag()) << ")";
  std::cout << "\nvalidity radius: " << format_double(z.validity_radius)
            << "\nzeros in disk:\n";
  for (const Zero& zz : z.zeros)
    std::cout << "  (" << format_double(zz.location.real()) << ","
              << format_double(zz.location.imag())
              << ") multiplicity " << zz.multiplicity
              << (zz.unstable ? " [unstable]" : "") << "\n";
  for (const Zero& zz : z.outside)
    std::cout << "  (" << format_double(zz.location.real()) << ","
              << format_double(zz.location.imag()) << ") [outside validity]\n";
  return kExitOk;
}

SpectrumReport spectrum_for(const RunConfig& cfg, double theta) {
  const auto ts = detect_markov(cfg.map);
  SpectrumReport spec;
  if (ts && cfg.weight.constant_on_partition(cfg.map)) {
    spec = eigen_spectrum(
        exact_transfer_matrix(*ts, cfg.weight.partition_values(cfg.map)));
  } else {
    spec = eigen_spectrum(ulam_matrix(cfg.map, cfg.weight, cfg.ulam_bins));
  }
  mark_dominant(spec, theta, cfg.margin);
  return spec;
}

int cmd_spectrum(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const ThetaEstimate theta =
      theta_estimate(cfg.map, cfg.weight, std::min(cfg.order, 12));
  const SpectrumReport spec = spectrum_for(cfg, theta.value);
  std::cout << "kind: " << spec.kind << "\ntheta: " << format_double(spec.theta)
            << " (" << theta.method << ")\nspectral radius: "
            << format_double(spec.spectral_radius) << "\neigenvalues:\n";
  const std::size_t shown = std::min<std::size_t>(spec.eigenvalues.size(), 16);
  for (std::size_t i = 0; i < shown; ++i)
    std::cout << "  (" << format_double(spec.eigenvalues[i].real()) << ","
              << format_double(spec.eigenvalues[i].imag()) << ")\n";
  if (spec.eigenvalues.size() > shown)
    std::cout << "  ... " << spec.eigenvalues.size() - shown << " more\n";
  return kExitOk;
}

int cmd_pressure(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const RepresentativeSet set = build_representative_set(cfg.map, cfg.order);
  const PressureEstimate est =
      pressure_from_orbits(cfg.map, cfg.weight, set, cfg.order);
  const ThetaEstimate theta =
      theta_estimate(cfg.map, cfg.weight, std::min(cfg.order, 12));
  const SpectrumReport spec = spectrum_for(cfg, theta.value);
  const double tol = cfg.tolerance
                         ? *cfg.tolerance
                         : (spec.kind == "exact-markov" ? 1e-6
                                                        : 10.0 / cfg.ulam_bins);
  const BoundsReport bounds =
      verify_pressure_bounds(theta.value, spec.spectral_radius, est,
                             cfg.weight.nonnegative_real(), spec.eigenvalues, tol);
  std::string csv = "m,P_m\n";
  for (std::size_t m = 0; m < est.p_sequence.size(); ++m)
    csv += std::to_string(m + 1) + "," + format_double(est.p_sequence[m]) + "\n";
  maybe_write(opt, "pressure.csv", csv);
  if (opt.output_dir.empty()) std::cout << csv;
  std::cout << "p_hat: " << format_double(est.p_hat)
            << "\ntheta: " << format_double(bounds.theta)
            << "\nr: " << format_double(bounds.r)
            << "\nleft_ok: " << (bounds.left_ok ? "true" : "false")
            << "\nright_ok: " << (bounds.right_ok ? "true" : "false") << "\n";
  return kExitOk;
}

int cmd_verify(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const VerifyReport report = run_verify(cfg);
  if (!opt.output_dir.empty())
    emit_report(report, opt.output_dir, opt.format);
  else if (opt.format == "json" || opt.format == "both")
    std::cout << report_json(report);
  std::cerr << "semantics: " << report.zeta_semantics
            << " (certificate: " << to_string(report.certificate) << ")\n"
            << "theta: " << format_double(report.theta.value)
            << "  r: " << format_double(report.spectrum.spectral_radius)
            << "  p_hat: " << format_double(report.pressure.p_hat) << "\n"
            << "B-K verdict: " << to_string(report.bk.verdict) << "\n";
  return report.bk.verdict == BkReport::Verdict::mismatch ? kExitBkMismatch
                                                          : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamical zeta functions and transfer-operator spectra for "
               "piecewise monotone interval maps"};
  app.require_subcommand(1);

  Options opt;
  const char* names[] = {"validate", "cylinders", "periodic", "zeta",
                         "spectrum", "pressure",  "verify"};
  const char* descs[] = {
      "check map/weight invariants and certificates",
      "export the length-m cylinder partition (m = order)",
      "enumerate the representative set of periodic points",
      "trace sums, d(z) coefficients and zeros",
      "transfer-operator spectrum and theta",
      "pressure sequence and inequality checks",
      "full pipeline with B-K crosscheck (exit 1 on mismatch)"};
  for (int i = 0; i < 7; ++i) add_common_flags(app.add_subcommand(names[i], descs[i]), opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("validate")) return cmd_validate(opt);
    if (app.got_subcommand("cylinders")) return cmd_cylinders(opt);
    if (app.got_subcommand("periodic")) return cmd_periodic(opt);
    if (app.got_subcommand("zeta")) return cmd_zeta(opt);
    if (app.got_subcommand("spectrum")) return cmd_spectrum(opt);
    if (app.got_subcommand("pressure")) return cmd_pressure(opt);
    if (app.got_subcommand("verify")) return cmd_verify(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
