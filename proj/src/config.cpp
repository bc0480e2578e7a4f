#include "dynzeta/config.hpp"

#include <json.hpp>

namespace dynzeta {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> keys,
                    const char* where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known)
      throw ConfigError(std::string("unknown key \"") + key + "\" in " + where);
  }
}

double require_number(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ConfigError(std::string(where) + " needs numeric \"" + key + "\"");
  return obj[key].get<double>();
}

cplx parse_complex(const json& v, const char* where) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return cplx(v[0].get<double>(), v[1].get<double>());
  throw ConfigError(std::string(where) + ": expected a number or [re, im]");
}

PiecewiseMonotoneMap parse_map(const json& jm) {
  reject_unknown(jm, {"breakpoints", "branches"}, "\"map\"");
  if (!jm.contains("breakpoints") || !jm["breakpoints"].is_array())
    throw ConfigError("\"map\" needs a \"breakpoints\" array");
  if (!jm.contains("branches") || !jm["branches"].is_array())
    throw ConfigError("\"map\" needs a \"branches\" array");
  std::vector<double> bp;
  for (const auto& v : jm["breakpoints"]) {
    if (!v.is_number()) throw ConfigError("breakpoints must be numbers");
    bp.push_back(v.get<double>());
  }
  std::vector<Branch> branches;
  for (const auto& jb : jm["branches"]) {
    if (!jb.is_object() || !jb.contains("kind"))
      throw ConfigError("each branch needs a \"kind\"");
    const std::string kind = jb["kind"].get<std::string>();
    if (kind == "affine") {
      reject_unknown(jb, {"kind", "slope", "intercept"}, "affine branch");
      branches.push_back(Branch::affine(require_number(jb, "slope", "affine branch"),
                                        require_number(jb, "intercept", "affine branch")));
    } else if (kind == "quadratic") {
      reject_unknown(jb, {"kind", "a", "b", "c"}, "quadratic branch");
      branches.push_back(Branch::quadratic(require_number(jb, "a", "quadratic branch"),
                                           require_number(jb, "b", "quadratic branch"),
                                           require_number(jb, "c", "quadratic branch")));
    } else {
      throw ConfigError("branch kind must be \"affine\" or \"quadratic\"");
    }
  }
  try {
    return PiecewiseMonotoneMap(std::move(bp), std::move(branches));
  } catch (const MapError& e) {
    throw ConfigError(e.what());
  }
}

Weight parse_weight(const json& jw, const PiecewiseMonotoneMap& map) {
  if (!jw.is_object() || !jw.contains("kind"))
    throw ConfigError("\"weight\" needs a \"kind\"");
  const std::string kind = jw["kind"].get<std::string>();
  try {
    if (kind == "constant") {
      reject_unknown(jw, {"kind", "values"}, "constant weight");
      if (!jw.contains("values") || !jw["values"].is_array())
        throw ConfigError("constant weight needs a \"values\" array");
      std::vector<cplx> values;
      for (const auto& v : jw["values"])
        values.push_back(parse_complex(v, "weight values"));
      if (values.size() == 1) return Weight::constant(values[0]);
      return Weight::per_interval(map, std::move(values));
    }
    if (kind == "piecewise_affine") {
      reject_unknown(jw, {"kind", "nodes", "values"}, "piecewise_affine weight");
      if (!jw.contains("nodes") || !jw["nodes"].is_array() ||
          !jw.contains("values") || !jw["values"].is_array())
        throw ConfigError("piecewise_affine weight needs \"nodes\" and \"values\"");
      std::vector<double> nodes;
      for (const auto& v : jw["nodes"]) {
        if (!v.is_number()) throw ConfigError("weight nodes must be numbers");
        nodes.push_back(v.get<double>());
      }
      std::vector<cplx> values;
      for (const auto& v : jw["values"])
        values.push_back(parse_complex(v, "weight values"));
      return Weight::piecewise_affine(std::move(nodes), std::move(values));
    }
    if (kind == "reciprocal_derivative") {
      reject_unknown(jw, {"kind", "scale"}, "reciprocal_derivative weight");
      return Weight::reciprocal_derivative(
          require_number(jw, "scale", "reciprocal_derivative weight"));
    }
  } catch (const MapError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("weight kind must be \"constant\", \"piecewise_affine\" or "
                    "\"reciprocal_derivative\"");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, {"map", "weight", "run"}, "config");
  if (!doc.contains("map")) throw ConfigError("config needs a \"map\" block");
  if (!doc.contains("weight")) throw ConfigError("config needs a \"weight\" block");

  PiecewiseMonotoneMap map = parse_map(doc["map"]);
  Weight weight = parse_weight(doc["weight"], map);
  try {
    check_weight_admissible(map, weight);
  } catch (const MapError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg{std::move(map), std::move(weight)};
  cfg.config_text = text;
  if (doc.contains("run")) {
    const json& jr = doc["run"];
    reject_unknown(jr, {"order", "ulam_bins", "margin", "tolerance"}, "\"run\"");
    if (jr.contains("order")) cfg.order = jr["order"].get<int>();
    if (jr.contains("ulam_bins")) cfg.ulam_bins = jr["ulam_bins"].get<int>();
    if (jr.contains("margin")) cfg.margin = jr["margin"].get<double>();
    if (jr.contains("tolerance")) cfg.tolerance = jr["tolerance"].get<double>();
  }
  if (cfg.order < 4 || cfg.order > 20)
    throw ConfigError("run.order must be in [4, 20]");
  if (cfg.ulam_bins < 16 || cfg.ulam_bins > 8192 ||
      (cfg.ulam_bins & (cfg.ulam_bins - 1)) != 0)
    throw ConfigError("run.ulam_bins must be a power of two in [16, 8192]");
  if (cfg.margin < 0.0) throw ConfigError("run.margin must be nonnegative");
  if (cfg.tolerance && *cfg.tolerance <= 0.0)
    throw ConfigError("run.tolerance must be positive");
  return cfg;
}

}  // namespace dynzeta
