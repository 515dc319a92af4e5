#include "commands.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "report.hpp"
#include "wicksell/errors.hpp"
#include "wicksell/estimators.hpp"
#include "wicksell/format.hpp"
#include "wicksell/synthetic.hpp"
#include "wicksell/verify.hpp"

namespace wicksell::cli {
namespace {

constexpr const char* kQuantileNote =
    "Credible bounds are inf-type empirical quantiles: with N draws the "
    "bound at level p is the k-th smallest draw, k = ceil(p * N) clamped to "
    "[1, N]; the band uses p = alpha/2 and p = 1 - alpha/2.";

constexpr const char* kSpecNote =
    "Model specs: exp:RATE, holder:GAMMA (peak at 5 on [0, 10], GAMMA > 1/2), "
    "uniform:B, table:FILE (two columns x, F). Prior specs: [MASS*]default "
    "(Exponential with rate 1/mean(data)), [MASS*]exp:RATE, "
    "[MASS*]uniform:B. Grid specs: START:STOP:STEPS (STEPS + 1 points).";

// Destination that is either a file or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed");
    if (file_) file_->close();
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void write_header(std::ostream& os, const std::string& command,
                  const json& config, std::uint64_t seed) {
  os << "# " << kToolName << " " << kToolVersion << "\n"
     << "# command: " << command << "\n"
     << "# config: " << config.dump() << "\n"
     << "# seed: " << seed << "\n";
}

struct DataOptions {
  std::string data;
  std::string positions;
  std::string center = "origin";

  void attach(CLI::App* app) {
    app->add_option("--data", data, "File of observables Z, one per line");
    app->add_option("--positions", positions,
                    "File of 2D positions (x, y); Z is the squared distance "
                    "to the center");
    app->add_option("--center", center, "Center for --positions")
        ->check(CLI::IsMember({"origin", "centroid"}));
  }

  SampleSet load() const {
    if (data.empty() == positions.empty()) {
      throw InvalidInput("give exactly one of --data or --positions");
    }
    if (!data.empty()) return read_observables(data);
    return ingest_positions(positions, parse_center_mode(center));
  }

  json to_json() const {
    if (!data.empty()) return {{"data", data}};
    return {{"positions", positions}, {"center", center}};
  }
};

struct PosteriorOptions {
  std::string grid = "0:10:200";
  std::size_t draws = 300;
  std::uint64_t seed = 1;
  std::string prior = "default";
  double truncation = kDefaultTruncationTol;
  std::size_t threads = 0;

  void attach(CLI::App* app) {
    app->add_option("--grid", grid, "Query grid START:STOP:STEPS")
        ->capture_default_str();
    app->add_option("--draws", draws, "Posterior draws")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--prior", prior, "DP base measure spec")
        ->capture_default_str();
    app->add_option("--truncation", truncation,
                    "Stick-breaking residual mass at which to stop")
        ->capture_default_str();
    app->add_option("--threads", threads,
                    "Worker threads (default: WICKSELL_THREADS or all cores)");
  }

  EnsembleSettings settings(std::span<const double> z) const {
    if (!(truncation > 0.0 && truncation < 1.0)) {
      throw InvalidInput("--truncation must lie in (0, 1)");
    }
    return {seed, BaseMeasureSpec::parse(prior, z), draws, truncation, threads};
  }

  json to_json(const EnsembleSettings& resolved) const {
    return {{"grid", grid},
            {"draws", draws},
            {"prior", resolved.prior.describe()},
            {"truncation", truncation}};
  }
};

int cmd_simulate(const std::string& model_spec, std::size_t n,
                 std::uint64_t seed, const std::string& out_path,
                 std::ostream& out) {
  const TrueModel model = parse_model_spec(model_spec);
  const SampleSet sample = sample_observables(model, n, seed);
  const json config = {{"model", model.spec()}, {"n", n}};

  Sink sink(out_path, out);
  write_header(sink.stream(), "simulate", config, seed);
  for (double z : sample.z_values) sink.stream() << format_double(z) << "\n";
  sink.close();

  if (!out_path.empty()) {
    const double end = model.support_end();
    json truth = json::array();
    for (int k = 1; k <= 9; ++k) {
      const double x = model.quantile(0.1 * k);
      const ModelTruth t = model_truth(model, x);
      truth.push_back({{"x", x}, {"F0", t.f0}, {"V0", t.v0}, {"g0", t.g0}});
    }
    json sidecar = {{"schema", "sample_v1"},
                    {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                    {"model", model.spec()},
                    {"n", n},
                    {"seed", seed},
                    {"support_end", std::isfinite(end) ? json(end) : json(nullptr)},
                    {"truth", std::move(truth)}};
    if (model.gamma()) sidecar["gamma"] = *model.gamma();
    if (model.holder_k()) sidecar["holder_k"] = *model.holder_k();
    Sink side(out_path + ".json", out);
    side.stream() << sidecar.dump(2) << "\n";
    side.close();
  }
  return kSuccess;
}

int cmd_estimate(const DataOptions& data_opts, const PosteriorOptions& post,
                 const std::string& out_path, const std::string& dump_path,
                 std::ostream& out) {
  const SampleSet sample = data_opts.load();
  const QueryGrid grid = QueryGrid::parse(post.grid);
  const EnsembleSettings settings = post.settings(sample.z_values);
  const IsotonicEstimate point = iie(sample.z_values, grid);
  const EnsemblePair ens = iip_ensemble(sample.z_values, settings, grid);
  const std::vector<double> v_mean = ens.v.mean();
  const std::vector<double> f_mean = ens.f.mean();

  json config = data_opts.to_json();
  config.update(post.to_json(settings));
  config["provenance"] = sample.describe();

  Sink sink(out_path, out);
  write_header(sink.stream(), "estimate", config, post.seed);
  sink.stream() << "x,v_iie,f_iie,v_post_mean,f_post_mean\n";
  for (std::size_t q = 0; q < grid.size(); ++q) {
    sink.stream() << format_double(grid[q]) << ',' << format_double(point.v[q])
                  << ',' << format_double(point.f[q]) << ','
                  << format_double(v_mean[q]) << ',' << format_double(f_mean[q])
                  << "\n";
  }
  sink.close();

  if (!dump_path.empty()) {
    Sink dump(dump_path, out);
    write_header(dump.stream(), "estimate --dump-draws", config, post.seed);
    dump.stream() << "draw,x,v_iso,f_iso\n";
    for (std::size_t d = 0; d < ens.v.draws.rows(); ++d) {
      for (std::size_t q = 0; q < grid.size(); ++q) {
        dump.stream() << d << ',' << format_double(grid[q]) << ','
                      << format_double(ens.v.draws(d, q)) << ','
                      << format_double(ens.f.draws(d, q)) << "\n";
      }
    }
    dump.close();
  }
  return kSuccess;
}

int cmd_uq(const DataOptions& data_opts, const PosteriorOptions& post,
           const std::string& method, const std::string& target_name,
           double alpha, std::size_t n_boot, const std::string& out_path,
           std::ostream& out) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInput("--alpha must lie in (0, 1)");
  }
  const SampleSet sample = data_opts.load();
  const QueryGrid grid = QueryGrid::parse(post.grid);
  const EnsembleSettings settings = post.settings(sample.z_values);
  const bool f_level = target_name == "F";
  const IsotonicEstimate point = iie(sample.z_values, grid);
  const std::vector<double>& point_values = f_level ? point.f : point.v;

  std::optional<CredibleBand> band;
  if (method == "iip") {
    const EnsemblePair ens = iip_ensemble(sample.z_values, settings, grid);
    band = credible_band(f_level ? ens.f : ens.v, alpha);
  } else {
    band = bootstrap_iie_band(sample.z_values, n_boot, grid, alpha, post.seed,
                              f_level ? Target::FIso : Target::VIso,
                              post.threads);
  }

  json config = data_opts.to_json();
  config.update(post.to_json(settings));
  config["method"] = method;
  config["target"] = target_name;
  config["alpha"] = alpha;
  if (method == "bootstrap") {
    config["boot"] = n_boot;
    config["bootstrap_scheme"] = "multinomial percentile";
  }
  config["provenance"] = sample.describe();

  Sink sink(out_path, out);
  write_header(sink.stream(), "uq", config, post.seed);
  sink.stream() << "x,lower,upper,point\n";
  for (std::size_t q = 0; q < grid.size(); ++q) {
    sink.stream() << format_double(grid[q]) << ','
                  << format_double(band->lower[q]) << ','
                  << format_double(band->upper[q]) << ','
                  << format_double(point_values[q]) << "\n";
  }
  sink.close();
  return kSuccess;
}

struct ExperimentOptions {
  std::string kind = "coverage";
  std::string model;
  ExperimentSettings s;
  std::string config_path;
  std::string out;
};

// Fills options that were not given on the command line from a JSON object
// whose keys are the long flag names without dashes.
void apply_config(CLI::App* app, ExperimentOptions& e) {
  std::ifstream in(e.config_path);
  if (!in) throw IoError("cannot open " + e.config_path);
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& error) {
    throw FormatError(e.config_path + ": " + error.what());
  }
  if (!config.is_object()) throw FormatError(e.config_path + ": not an object");
  const std::map<std::string, std::function<void(const json&)>> setters = {
      {"kind", [&](const json& v) { e.kind = v.get<std::string>(); }},
      {"model", [&](const json& v) { e.model = v.get<std::string>(); }},
      {"n", [&](const json& v) { e.s.n = v.get<std::size_t>(); }},
      {"x", [&](const json& v) { e.s.x = v.get<double>(); }},
      {"reps", [&](const json& v) { e.s.n_reps = v.get<std::size_t>(); }},
      {"draws", [&](const json& v) { e.s.n_draws = v.get<std::size_t>(); }},
      {"alpha", [&](const json& v) { e.s.alpha = v.get<double>(); }},
      {"boot", [&](const json& v) { e.s.n_boot = v.get<std::size_t>(); }},
      {"seed", [&](const json& v) { e.s.seed = v.get<std::uint64_t>(); }},
      {"prior-mass", [&](const json& v) { e.s.prior_mass = v.get<double>(); }},
      {"truncation",
       [&](const json& v) { e.s.truncation_tol = v.get<double>(); }},
  };
  for (const auto& [key, value] : config.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw FormatError(e.config_path + ": unknown key '" + key + "'");
    }
    if (app->get_option("--" + key)->count() > 0) continue;
    try {
      it->second(value);
    } catch (const json::exception&) {
      throw FormatError(e.config_path + ": bad value for '" + key + "'");
    }
  }
}

int cmd_experiment(ExperimentOptions& e, std::ostream& out) {
  if (e.model.empty()) throw InvalidInput("--model is required");
  if (e.s.n_reps == 0) throw InvalidInput("--reps must be at least 1");
  if (e.s.n < 2) throw InvalidInput("--n must be at least 2");
  if (!(e.s.alpha > 0.0 && e.s.alpha < 1.0)) {
    throw InvalidInput("--alpha must lie in (0, 1)");
  }
  if (!(e.s.prior_mass > 0.0)) throw InvalidInput("--prior-mass must be > 0");
  const TrueModel model = parse_model_spec(e.model);
  json report;
  if (e.kind == "coverage") {
    report = coverage_to_json(coverage_experiment(model, e.s));
  } else if (e.kind == "variance") {
    report = variance_to_json(variance_experiment(model, e.s));
  } else {
    throw InvalidInput("--kind must be coverage or variance");
  }
  validate_report(report);
  Sink sink(e.out, out);
  sink.stream() << report.dump(2) << "\n";
  sink.close();
  return kSuccess;
}

int cmd_verify(const VerifyOptions& options, const std::string& out_path,
               std::ostream& out) {
  const VerifyReport report = run_verify(options);
  std::size_t passed = 0;
  for (const CheckResult& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail
        << "\n";
    if (c.passed) ++passed;
  }
  out << "verify: " << passed << "/" << report.checks.size()
      << " checks passed\n";
  if (!out_path.empty()) {
    Sink sink(out_path, out);
    sink.stream() << verify_to_json(report, options).dump(2) << "\n";
    sink.close();
  }
  return report.passed() ? kSuccess : kCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Bayesian nonparametric estimation for Wicksell's problem.\n" +
                   std::string(kSpecNote),
               kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string model_spec;
  std::size_t n = 0;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Sample observables Z = (1 - U^2) X with X ~ F0");
  simulate->add_option("--model", model_spec, "Model spec")->required();
  simulate->add_option("--n", n, "Sample size")->required()->check(
      CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
  simulate->add_option("--out", sim_out,
                       "CSV output (a JSON sidecar goes to OUT.json)");

  DataOptions est_data;
  PosteriorOptions est_post;
  std::string est_out;
  std::string est_dump;
  CLI::App* estimate = app.add_subcommand(
      "estimate",
      "Isotonized inverse estimate and posterior means of V and F on a grid");
  est_data.attach(estimate);
  est_post.attach(estimate);
  estimate->add_option("--out", est_out, "CSV output");
  estimate->add_option("--dump-draws", est_dump,
                       "Also write every posterior draw (long format)");

  DataOptions uq_data;
  PosteriorOptions uq_post;
  std::string uq_method = "iip";
  std::string uq_target = "F";
  double uq_alpha = 0.05;
  std::size_t uq_boot = 300;
  std::string uq_out;
  CLI::App* uq = app.add_subcommand(
      "uq", std::string("Pointwise credible or bootstrap band. ") + kQuantileNote);
  uq_data.attach(uq);
  uq_post.attach(uq);
  uq->add_option("--method", uq_method, "iip or bootstrap")
      ->capture_default_str()
      ->check(CLI::IsMember({"iip", "bootstrap"}));
  uq->add_option("--target", uq_target, "F or V")
      ->capture_default_str()
      ->check(CLI::IsMember({"F", "V"}));
  uq->add_option("--alpha", uq_alpha, "Band level is 1 - alpha")
      ->capture_default_str();
  uq->add_option("--boot", uq_boot, "Bootstrap resamples")
      ->capture_default_str();
  uq->add_option("--out", uq_out, "CSV output");

  ExperimentOptions exp_opts;
  CLI::App* experiment = app.add_subcommand(
      "experiment",
      std::string("Monte-Carlo coverage or variance experiment; writes a "
                  "report_v1 JSON document. ") +
          kQuantileNote);
  experiment->add_option("--kind", exp_opts.kind, "coverage or variance")
      ->capture_default_str();
  experiment->add_option("--model", exp_opts.model, "Model spec");
  experiment->add_option("--n", exp_opts.s.n, "Sample size per replication")
      ->capture_default_str();
  experiment->add_option("--x", exp_opts.s.x, "Evaluation point")
      ->capture_default_str();
  experiment->add_option("--reps", exp_opts.s.n_reps, "Replications")
      ->capture_default_str();
  experiment->add_option("--draws", exp_opts.s.n_draws, "Posterior draws")
      ->capture_default_str();
  experiment->add_option("--alpha", exp_opts.s.alpha, "Band level 1 - alpha")
      ->capture_default_str();
  experiment->add_option("--boot", exp_opts.s.n_boot,
                         "Bootstrap resamples for the comparator (0: off)")
      ->capture_default_str();
  experiment->add_option("--seed", exp_opts.s.seed, "Random seed")
      ->capture_default_str();
  experiment->add_option("--prior-mass", exp_opts.s.prior_mass,
                         "Total mass of the DP base measure")
      ->capture_default_str();
  experiment->add_option("--truncation", exp_opts.s.truncation_tol,
                         "Stick-breaking residual mass at which to stop")
      ->capture_default_str();
  experiment->add_option("--threads", exp_opts.s.threads, "Worker threads");
  experiment->add_option("--config", exp_opts.config_path,
                         "JSON object of defaults keyed by flag name");
  experiment->add_option("--out", exp_opts.out, "JSON output");

  VerifyOptions verify_opts;
  std::string verify_out;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the oracle identity suite; exit 0 iff every check passes");
  verify->add_option("--f0-tol", verify_opts.f0_tol)->capture_default_str();
  verify->add_option("--arcsin-tol", verify_opts.arcsin_tol)
      ->capture_default_str();
  verify->add_option("--hull-tol", verify_opts.hull_tol)->capture_default_str();
  verify->add_option("--pava-tol", verify_opts.pava_tol)->capture_default_str();
  verify->add_option("--v0-tol", verify_opts.v0_tol)->capture_default_str();
  verify->add_option("--seed", verify_opts.seed)->capture_default_str();
  verify->add_option("--measures", verify_opts.n_measures,
                     "Random measures per check")
      ->capture_default_str();
  verify->add_option("--hull-grid", verify_opts.hull_grid,
                     "Grid size of the brute-force majorant")
      ->capture_default_str();
  verify->add_option("--out", verify_out, "JSON report");

  std::vector<const char*> argv{kToolName};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(model_spec, n, sim_seed, sim_out, out);
    }
    if (estimate->parsed()) {
      return cmd_estimate(est_data, est_post, est_out, est_dump, out);
    }
    if (uq->parsed()) {
      return cmd_uq(uq_data, uq_post, uq_method, uq_target, uq_alpha, uq_boot,
                    uq_out, out);
    }
    if (experiment->parsed()) {
      if (!exp_opts.config_path.empty()) apply_config(experiment, exp_opts);
      return cmd_experiment(exp_opts, out);
    }
    return cmd_verify(verify_opts, verify_out, out);
  } catch (const InvalidInput& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidModel& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

}  // namespace wicksell::cli
