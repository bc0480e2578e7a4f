#include "dynzeta/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>

namespace dynzeta {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

VerifyReport run_verify(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const PiecewiseMonotoneMap& map = cfg.map;
  const Weight& w = cfg.weight;

  VerifyReport report;
  report.config_hash = fnv1a_hex(cfg.config_text);

  report.validation = validate_map(map, w);
  if (!report.validation.ok())
    throw MapError("map failed validation (continuity/monotonicity/into)");
  report.certificate = representativity_certificate(map, report.validation);
  report.zeta_semantics =
      report.certificate == Representativity::constructed ? "zeta_S" : "zeta";

  report.markov = detect_markov(map);

  report.set = build_representative_set(map, cfg.order);
  fill_weight_products(map, w, report.set);
  report.cylinders = refine_cylinders(map, cfg.order);
  report.traces = trace_sums(map, w, report.set, cfg.order);

  const PowerSeries d = d_series_from_traces(report.traces);
  report.zeta_coefficients = zeta_series(d);

  report.theta = theta_estimate(map, w, std::min(cfg.order, 12));
  const double rho = report.theta.value > 1e-300
                         ? 0.95 / report.theta.value
                         : std::numeric_limits<double>::infinity();
  report.zeta = find_zeros_in_disk(d, rho);

  const bool exact_path = report.markov && w.constant_on_partition(map);
  double tol;
  if (exact_path) {
    const auto g = w.partition_values(map);
    report.determinant_oracle = markov_determinant_oracle(*report.markov, g);
    report.spectrum = eigen_spectrum(exact_transfer_matrix(*report.markov, g));
    tol = 1e-6;
  } else {
    report.spectrum = eigen_spectrum(ulam_matrix(map, w, cfg.ulam_bins));
    tol = 10.0 / cfg.ulam_bins;
  }
  if (cfg.tolerance) tol = *cfg.tolerance;
  report.bk_tolerance = tol;
  mark_dominant(report.spectrum, report.theta.value, cfg.margin);

  report.pressure = pressure_from_orbits(map, w, report.set, cfg.order);
  report.bounds = verify_pressure_bounds(report.theta.value,
                                         report.spectrum.spectral_radius,
                                         report.pressure, w.nonnegative_real(),
                                         report.spectrum.eigenvalues, tol);
  report.bk = bk_crosscheck(report.zeta, report.spectrum, cfg.margin, tol);

  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return report;
}

namespace {

ordered_json complex_json(const cplx& z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json complex_list_json(const std::vector<cplx>& v) {
  ordered_json arr = ordered_json::array();
  for (const cplx& z : v) arr.push_back(complex_json(z));
  return arr;
}

ordered_json zeros_json(const std::vector<Zero>& zeros) {
  ordered_json arr = ordered_json::array();
  for (const Zero& z : zeros) {
    ordered_json jz;
    jz["re"] = z.location.real();
    jz["im"] = z.location.imag();
    jz["multiplicity"] = z.multiplicity;
    jz["stability"] = std::isfinite(z.stability) ? z.stability : -1.0;
    jz["unstable"] = z.unstable;
    arr.push_back(jz);
  }
  return arr;
}

double finite_or(double v, double fallback) {
  return std::isfinite(v) ? v : fallback;
}

}  // namespace

std::string report_json(const VerifyReport& r) {
  ordered_json j;
  j["version"] = "0.1.0";
  j["config_hash"] = r.config_hash;

  ordered_json jv;
  jv["continuity_residuals"] = r.validation.continuity_residuals;
  jv["monotone_ok"] = r.validation.monotone_ok;
  jv["into_ok"] = r.validation.into_ok;
  jv["schwarzian_negative"] = to_string(r.validation.schwarzian_negative);
  jv["slope_resonance_free"] = to_string(r.validation.slope_resonance_free);
  jv["generating"] = to_string(r.validation.generating);
  j["validation"] = jv;

  j["certificate"] = to_string(r.certificate);
  j["zeta_semantics"] = r.zeta_semantics;

  if (r.markov) {
    ordered_json jm;
    jm["matrix"] = r.markov->t;
    j["markov"] = jm;
  } else {
    j["markov"] = nullptr;
  }

  j["traces"] = complex_list_json(r.traces);
  j["d_coefficients"] = complex_list_json(r.zeta.d.c);
  j["zeta_coefficients"] = complex_list_json(r.zeta_coefficients.c);
  j["determinant_oracle"] =
      r.determinant_oracle ? complex_list_json(r.determinant_oracle->c)
                           : ordered_json(nullptr);

  ordered_json jt;
  jt["value"] = r.theta.value;
  jt["method"] = r.theta.method;
  ordered_json seq = ordered_json::array();
  for (double s : r.theta.s_sequence) seq.push_back(finite_or(s, -1e308));
  jt["s_sequence"] = seq;
  j["theta"] = jt;

  ordered_json jz;
  jz["validity_radius"] = finite_or(r.zeta.validity_radius, -1.0);
  jz["zeros"] = zeros_json(r.zeta.zeros);
  jz["outside_validity"] = zeros_json(r.zeta.outside);
  j["zeta_zeros"] = jz;

  ordered_json js;
  js["kind"] = r.spectrum.kind;
  js["converged"] = r.spectrum.converged;
  js["eigenvalues"] = complex_list_json(r.spectrum.eigenvalues);
  js["spectral_radius"] = r.spectrum.spectral_radius;
  js["dominant_above_theta"] = complex_list_json(r.spectrum.dominant_above_theta);
  j["spectrum"] = js;

  ordered_json jp;
  ordered_json pseq = ordered_json::array();
  for (double p : r.pressure.p_sequence) pseq.push_back(finite_or(p, -1e308));
  jp["p_sequence"] = pseq;
  jp["p_hat"] = finite_or(r.pressure.p_hat, -1e308);
  jp["method"] = r.pressure.method;
  jp["defined"] = r.pressure.defined;
  jp["diagnostic"] = r.pressure.diagnostic;
  j["pressure"] = jp;

  ordered_json jb;
  jb["theta"] = r.bounds.theta;
  jb["r"] = r.bounds.r;
  jb["p_hat"] = finite_or(r.bounds.p_hat, -1e308);
  jb["degenerate"] = r.bounds.degenerate;
  jb["left_ok"] = r.bounds.left_ok;
  jb["right_ok"] = r.bounds.right_ok;
  jb["eigen_claim_applicable"] = r.bounds.eigen_claim_applicable;
  jb["eigen_claim_ok"] = r.bounds.eigen_claim_ok;
  jb["left_residual"] = r.bounds.left_residual;
  jb["right_residual"] = r.bounds.right_residual;
  jb["eigen_residual"] = r.bounds.eigen_residual;
  j["bounds"] = jb;

  ordered_json jk;
  jk["verdict"] = to_string(r.bk.verdict);
  jk["tolerance"] = r.bk_tolerance;
  jk["margin"] = r.bk.margin;
  ordered_json pairs = ordered_json::array();
  for (const BkPair& p : r.bk.pairs) {
    ordered_json jp2;
    jp2["zero_reciprocal"] = complex_json(p.zero_reciprocal);
    jp2["eigenvalue"] = complex_json(p.eigenvalue);
    jp2["distance"] = p.distance;
    pairs.push_back(jp2);
  }
  jk["pairs"] = pairs;
  jk["unmatched_zero_reciprocals"] =
      complex_list_json(r.bk.unmatched_zero_reciprocals);
  jk["unmatched_eigenvalues"] = complex_list_json(r.bk.unmatched_eigenvalues);
  j["bk"] = jk;

  ordered_json prov;
  prov["records"] = [&] {
    std::size_t c = 0;
    for (const auto& recs : r.set.by_period) c += recs.size();
    return c;
  }();
  prov["wall_time_ms"] = r.wall_ms;
  j["provenance"] = prov;

  return j.dump(2) + "\n";
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string traces_csv(const VerifyReport& r) {
  std::string csv = "m,re_T,im_T\n";
  for (std::size_t m = 0; m < r.traces.size(); ++m)
    csv += std::to_string(m + 1) + "," + format_double(r.traces[m].real()) +
           "," + format_double(r.traces[m].imag()) + "\n";
  return csv;
}

std::string cylinders_csv(const VerifyReport& r) {
  std::string csv = "word,lo,hi\n";
  for (const Cylinder& c : r.cylinders)
    csv += c.word.str() + "," + format_double(c.lo) + "," +
           format_double(c.hi) + "\n";
  return csv;
}

std::string periodic_csv(const VerifyReport& r) {
  std::string csv = "m,word,x,re_w,im_w,degenerate\n";
  for (const auto& recs : r.set.by_period)
    for (const auto& rec : recs)
      csv += std::to_string(rec.period) + "," + rec.word.str() + "," +
             format_double(rec.x) + "," +
             format_double(rec.weight_product.real()) + "," +
             format_double(rec.weight_product.imag()) + "," +
             (rec.degenerate ? "1" : "0") + "\n";
  return csv;
}

std::string pressure_csv(const VerifyReport& r) {
  std::string csv = "m,P_m\n";
  for (std::size_t m = 0; m < r.pressure.p_sequence.size(); ++m)
    csv += std::to_string(m + 1) + "," +
           format_double(r.pressure.p_sequence[m]) + "\n";
  return csv;
}

std::string plotdata_csv(const VerifyReport& r) {
  std::string csv = "re,im,kind,outside_validity\n";
  auto add = [&](const cplx& z, const char* kind, bool outside) {
    csv += format_double(z.real()) + "," + format_double(z.imag()) + "," +
           kind + "," + (outside ? "1" : "0") + "\n";
  };
  for (const Zero& z : r.zeta.zeros)
    add(cplx(1.0, 0.0) / z.location, "zeta-zero-reciprocal", false);
  for (const Zero& z : r.zeta.outside)
    add(cplx(1.0, 0.0) / z.location, "zeta-zero-reciprocal", true);
  for (const cplx& ev : r.spectrum.eigenvalues) add(ev, "eigenvalue", false);
  return csv;
}

}  // namespace

std::vector<std::string> emit_report(const VerifyReport& report,
                                     const std::string& out_dir,
                                     const std::string& format) {
  if (format != "json" && format != "csv" && format != "both")
    throw IoError("format must be json, csv or both");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir);
  if (!fs::is_directory(out_dir))
    throw IoError("output path is not a directory: " + out_dir);

  std::vector<std::string> written;
  auto emit = [&](const char* name, const std::string& content) {
    const fs::path p = fs::path(out_dir) / name;
    write_file(p, content);
    written.push_back(p.string());
  };
  if (format == "json" || format == "both")
    emit("report.json", report_json(report));
  if (format == "csv" || format == "both") {
    emit("traces.csv", traces_csv(report));
    emit("cylinders.csv", cylinders_csv(report));
    emit("periodic.csv", periodic_csv(report));
    emit("pressure.csv", pressure_csv(report));
    emit("plotdata.csv", plotdata_csv(report));
  }
  return written;
}

}  // namespace dynzeta
