#include "report.hpp"

#include "wicksell/errors.hpp"

namespace wicksell::cli {
namespace {

json envelope(const std::string& kind, json config, std::uint64_t seed,
              json results, double wall_time) {
  return json{{"schema", kReportSchema},
              {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
              {"kind", kind},
              {"config", std::move(config)},
              {"seed", seed},
              {"results", std::move(results)},
              {"timing", {{"wall_time_seconds", wall_time}}}};
}

json normality_to_json(const NormalityResult& n) {
  return {{"anderson_darling", n.anderson_darling},
          {"p_value", n.p_value},
          {"qq_correlation", n.qq_correlation}};
}

void require(const json& object, const std::string& where,
             const std::string& key, json::value_t type) {
  if (!object.is_object() || !object.contains(key)) {
    throw FormatError(where + ": missing field '" + key + "'");
  }
  const json& value = object.at(key);
  const bool numeric = type == json::value_t::number_float &&
                       value.is_number();
  const bool integral = type == json::value_t::number_unsigned &&
                        value.is_number_integer() &&
                        value.get<std::int64_t>() >= 0;
  if (!numeric && !integral && value.type() != type) {
    throw FormatError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

json settings_to_json(const ExperimentSettings& s) {
  return {{"n", s.n},
          {"x", s.x},
          {"reps", s.n_reps},
          {"draws", s.n_draws},
          {"alpha", s.alpha},
          {"seed", s.seed},
          {"prior_mass", s.prior_mass},
          {"truncation_tol", s.truncation_tol},
          {"boot", s.n_boot}};
}

json coverage_to_json(const CoverageReport& r) {
  json config = settings_to_json(r.settings);
  config["model"] = r.model;
  json results = {{"truth_f0", r.truth},
                  {"coverage_rate", r.coverage_rate},
                  {"mean_ci_width", r.mean_ci_width},
                  {"ci_widths", r.widths},
                  {"covered", r.covered},
                  {"empirical_variance", r.empirical_variance},
                  {"theoretical_variance", r.theoretical_variance},
                  {"normality_final_rep", normality_to_json(r.final_normality)},
                  {"delta_n", r.delta},
                  {"delta_n_star", r.delta_star}};
  if (r.bootstrap_coverage_rate) {
    results["bootstrap"] = {{"coverage_rate", *r.bootstrap_coverage_rate},
                            {"mean_ci_width", *r.mean_bootstrap_width},
                            {"ci_widths", r.bootstrap_widths},
                            {"scheme", "multinomial percentile"}};
  }
  return envelope("coverage", std::move(config), r.settings.seed,
                  std::move(results), r.wall_time_seconds);
}

json variance_to_json(const VarianceReport& r) {
  json config = settings_to_json(r.settings);
  config["model"] = r.model;
  json results = {{"g0", r.g0},
                  {"gamma", r.gamma},
                  {"iip_variance", r.iip_variance},
                  {"nbp_variance", r.nbp_variance},
                  {"iip_ratio", r.iip_ratio},
                  {"nbp_ratio", r.nbp_ratio},
                  {"iip_over_nbp", r.iip_over_nbp},
                  {"qq_correlation", r.qq_correlation},
                  {"mean_iip_ratio", r.mean_iip_ratio},
                  {"mean_nbp_ratio", r.mean_nbp_ratio},
                  {"fraction_iip_over_nbp_below_0_7",
                   r.fraction_iip_over_nbp_below},
                  {"fraction_qq_above_0_99", r.fraction_qq_above},
                  {"delta_n", r.delta},
                  {"delta_n_star", r.delta_star}};
  return envelope("variance", std::move(config), r.settings.seed,
                  std::move(results), r.wall_time_seconds);
}

json verify_to_json(const VerifyReport& report, const VerifyOptions& o) {
  json config = {{"f0_tol", o.f0_tol},       {"arcsin_tol", o.arcsin_tol},
                 {"hull_tol", o.hull_tol},   {"pava_tol", o.pava_tol},
                 {"v0_tol", o.v0_tol},       {"grid_points", o.grid_points},
                 {"n_measures", o.n_measures}, {"max_atoms", o.max_atoms},
                 {"hull_grid", o.hull_grid}, {"switch_pairs", o.switch_pairs}};
  json checks = json::array();
  double total = 0.0;
  for (const CheckResult& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"worst", c.worst},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
    total += c.seconds;
  }
  json results = {{"passed", report.passed()}, {"checks", std::move(checks)}};
  return envelope("verify", std::move(config), o.seed, std::move(results),
                  total);
}

void validate_report(const json& d) {
  using V = json::value_t;
  require(d, "report", "schema", V::string);
  if (d.at("schema") != kReportSchema) {
    throw FormatError("report: unknown schema " + d.at("schema").dump());
  }
  require(d, "report", "tool", V::object);
  require(d.at("tool"), "tool", "name", V::string);
  require(d.at("tool"), "tool", "version", V::string);
  require(d, "report", "kind", V::string);
  require(d, "report", "config", V::object);
  require(d, "report", "seed", V::number_unsigned);
  require(d, "report", "results", V::object);
  require(d, "report", "timing", V::object);
  require(d.at("timing"), "timing", "wall_time_seconds", V::number_float);

  const std::string kind = d.at("kind");
  const json& r = d.at("results");
  if (kind == "coverage") {
    require(d.at("config"), "config", "model", V::string);
    for (const char* key : {"truth_f0", "coverage_rate", "mean_ci_width",
                            "empirical_variance", "theoretical_variance",
                            "delta_n", "delta_n_star"}) {
      require(r, "results", key, V::number_float);
    }
    require(r, "results", "ci_widths", V::array);
    require(r, "results", "covered", V::array);
    require(r, "results", "normality_final_rep", V::object);
    const double rate = r.at("coverage_rate");
    if (rate < 0.0 || rate > 1.0) {
      throw FormatError("results: coverage_rate outside [0, 1]");
    }
  } else if (kind == "variance") {
    require(d.at("config"), "config", "model", V::string);
    for (const char* key : {"g0", "gamma", "mean_iip_ratio", "mean_nbp_ratio",
                            "fraction_iip_over_nbp_below_0_7",
                            "fraction_qq_above_0_99", "delta_n",
                            "delta_n_star"}) {
      require(r, "results", key, V::number_float);
    }
    for (const char* key : {"iip_variance", "nbp_variance", "iip_ratio",
                            "nbp_ratio", "iip_over_nbp", "qq_correlation"}) {
      require(r, "results", key, V::array);
    }
  } else if (kind == "verify") {
    require(r, "results", "passed", V::boolean);
    require(r, "results", "checks", V::array);
  } else {
    throw FormatError("report: unknown kind '" + kind + "'");
  }
}

json without_timing(const json& document) {
  json copy = document;
  copy.erase("timing");
  return copy;
}

}  // namespace wicksell::cli
