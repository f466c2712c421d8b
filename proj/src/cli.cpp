#include "statlab/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "statlab/error.hpp"
#include "statlab/harness.hpp"
#include "statlab/instance_io.hpp"
#include "statlab/solvers.hpp"
#include "statlab/stationarity.hpp"
#include "statlab/suites.hpp"

namespace statlab {

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::filesystem::path output_dir(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("STATLAB_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "statlab_out";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
}

void write_transcript(const std::filesystem::path& path, const Transcript& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  write_jsonl(t, f);
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

/// Inline JSON when the argument starts with '{' or '[', otherwise a file path.
json json_argument(const std::string& arg, const std::string& what) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return parse_json_text(arg, what);
  std::ifstream f(arg);
  if (!f) throw ConfigError(what + ": cannot read " + arg);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_json_text(ss.str(), what);
}

std::vector<double> parse_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": cannot parse number '" + item + "'");
    }
  }
  return out;
}

Vector parse_point(const std::string& text) {
  if (text.find('[') != std::string::npos) {
    try {
      return vector_from_json(parse_json_text(text, "--point"));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("--point: ") + e.what());
    }
  }
  return Vector(parse_numbers(text, ',', "--point"));
}

Exec parse_exec(const std::string& s) {
  if (s == "serial") return Exec::serial;
  if (s == "parallel") return Exec::parallel;
  throw ConfigError("--exec must be serial or parallel");
}

void print_check(std::ostream& out, const Check& c, const std::string& prefix = "") {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g %s %.6g", c.measured, c.relation.c_str(), c.threshold);
  out << (c.pass ? "PASS " : "FAIL ") << c.claim << ' ' << prefix << c.name << "  " << buf << '\n';
}

// Flags mirroring config fields; each one overrides the config file.
struct ConfigOverrides {
  std::string config_path;
  std::optional<std::string> experiment;
  std::optional<int> T;
  std::optional<std::size_t> d;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> output_path;
  std::optional<std::string> solver_kind;
  std::optional<std::string> solver_params;
  std::optional<std::string> adversary_mode;
  std::optional<double> adversary_w_norm;
  std::optional<std::string> adversary_geometry;
  std::optional<std::string> tolerances;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--experiment", experiment, "experiment name");
    app.add_option("--T", T, "horizon");
    app.add_option("--d", d, "dimension");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--trials", trials, "trials for randomized experiments");
    app.add_option("--output_path", output_path, "output directory");
    app.add_option("--solver.kind", solver_kind, "solver name");
    app.add_option("--solver.params", solver_params, "solver parameters (JSON object)");
    app.add_option("--adversary.mode", adversary_mode, "deterministic_orthogonal | randomized_sphere");
    app.add_option("--adversary.w_norm", adversary_w_norm, "norm of w");
    app.add_option("--adversary.geometry", adversary_geometry, "auto | natural | rotation");
    app.add_option("--tolerances", tolerances, "tolerance overrides (JSON object)");
  }

  ExperimentConfig resolve() const {
    json j = json::object();
    if (!config_path.empty()) {
      j = json_argument(config_path, "--config");
      if (!j.is_object()) throw ConfigError("--config: expected a JSON object");
    }
    if (experiment) j["experiment"] = *experiment;
    if (T) j["T"] = *T;
    if (d) j["d"] = *d;
    if (seed) j["seed"] = *seed;
    if (trials) j["trials"] = *trials;
    if (output_path) j["output_path"] = *output_path;
    if (solver_kind || solver_params) {
      if (j.contains("solver") && j["solver"].is_string()) j["solver"] = json{{"kind", j["solver"]}};
      if (!j.contains("solver")) j["solver"] = json::object();
      if (solver_kind) j["solver"]["kind"] = *solver_kind;
      if (solver_params) j["solver"]["params"] = parse_json_text(*solver_params, "--solver.params");
    }
    if (adversary_mode || adversary_w_norm || adversary_geometry) {
      if (!j.contains("adversary")) j["adversary"] = json::object();
      if (adversary_mode) j["adversary"]["mode"] = *adversary_mode;
      if (adversary_w_norm) j["adversary"]["w_norm"] = *adversary_w_norm;
      if (adversary_geometry) j["adversary"]["geometry"] = *adversary_geometry;
    }
    if (tolerances) j["tolerances"] = parse_json_text(*tolerances, "--tolerances");
    ExperimentConfig cfg = ExperimentConfig::from_json(j);
    cfg.validate();
    return cfg;
  }
};

// ---------------------------------------------------------------------------

int cmd_run(const ConfigOverrides& o, const std::string& exec_name, std::ostream& out) {
  const ExperimentConfig cfg = o.resolve();
  const Exec exec = parse_exec(exec_name);
  const ExperimentResult res = run_experiment(cfg, exec);

  const std::filesystem::path dir = output_dir(cfg.output_path);
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", res.report().dump(2) + "\n");
  if (res.transcript) write_transcript(dir / "transcript.jsonl", *res.transcript);
  for (const auto& [stem, t] : res.extra_transcripts) write_transcript(dir / (stem + ".jsonl"), t);

  for (const Check& c : res.verdicts) print_check(out, c);
  out << "report: " << (dir / "report.json").string() << '\n';
  return res.all_pass() ? kExitPass : kExitFail;
}

struct CertifyArgs {
  std::string function;
  std::string point;
  std::string notion = "eps";
  double eps = 1e-8;
  double delta = 0.1;
  std::size_t samples = 1000;
  std::string stencil;
  std::uint64_t seed = 0;
};

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  const BuiltInstance inst = build_instance(instance_from_json(json_argument(a.function, "--function")));
  const Vector x = parse_point(a.point);
  if (x.dim() != inst.dim) {
    throw ConfigError("--point has dimension " + std::to_string(x.dim()) + ", function expects " +
                      std::to_string(inst.dim));
  }
  FunctionOracle oracle(inst.dim, inst.eval);

  StationarityCertificate cert;
  if (a.notion == "eps") {
    cert = certify_eps(oracle, x, a.eps);
  } else if (a.notion == "delta_eps") {
    Sampling sampling = Sampling::ball_uniform(a.samples);
    if (!a.stencil.empty()) {
      std::vector<Vector> offsets;
      std::stringstream ss(a.stencil);
      std::string item;
      while (std::getline(ss, item, ';')) offsets.emplace_back(parse_numbers(item, ',', "--stencil"));
      for (const Vector& v : offsets) {
        if (v.dim() != inst.dim) throw ConfigError("--stencil offsets must match the function dimension");
      }
      sampling = Sampling::stencil(std::move(offsets));
    }
    Rng rng(a.seed);
    cert = certify_delta_eps(oracle, x, a.delta, a.eps, sampling, rng);
  } else {
    throw ConfigError("--notion must be eps or delta_eps");
  }

  json report = {{"notion", a.notion}, {"certificate", cert.to_json()}};
  bool produced = cert.witness.has_value();
  if (!produced && inst.channel) {
    try {
      const StationarityCertificate lb = subdiff_norm_lower_bound(*inst.channel, x);
      report["lower_bound"] = lb.to_json();
      produced = a.notion == "eps" && lb.value > a.eps;
    } catch (const PreconditionViolation& e) {
      report["lower_bound"] = {{"unavailable", e.what()}};
    }
  }
  report["produced"] = produced;
  out << report.dump(2) << '\n';
  return produced ? kExitPass : kExitFail;
}

int cmd_adversary(const ConfigOverrides& o, std::ostream& out) {
  ExperimentConfig cfg = o.resolve();
  if (cfg.experiment != "theorem1" && cfg.experiment != "theorem1_randomized") {
    cfg.experiment = "theorem1";
    cfg.validate();
  }
  const AlgorithmDescriptor alg = make_solver(cfg.solver, cfg.solver_params);
  const bool randomized = cfg.experiment == "theorem1_randomized";
  const ChannelAdversaryConfig acfg = adversary_config(
      cfg, randomized ? ChannelMode::randomized_sphere : ChannelMode::deterministic_orthogonal);
  const ChannelBuild build = build_channel_instance(acfg, alg, cfg.T, cfg.d, Rng(cfg.seed));

  const json doc = {{"config", cfg.to_json()},
                    {"instance", instance_to_json(spec_from_channel(build.instance))},
                    {"diagnostics", build.diagnostics()}};
  const std::filesystem::path dir = output_dir(cfg.output_path);
  std::filesystem::create_directories(dir);
  write_text(dir / "instance.json", doc.dump(2) + "\n");
  write_transcript(dir / "transcript_f_tilde.jsonl", build.f_transcript);

  const bool ok = build.all_almosthard2() && build.replay_identical;
  out << (ok ? "PASS" : "FAIL") << " instance built: almosthard2=" << build.all_almosthard2()
      << " replay_identical=" << build.replay_identical << '\n';
  out << "instance: " << (dir / "instance.json").string() << '\n';
  return ok ? kExitPass : kExitFail;
}

struct FigureArgs {
  std::string figure;
  std::string range = "-2,2,-2,2";
  std::size_t resolution = 101;
  double delta = 1.0;
  bool extended = false;
  std::string output;
};

int cmd_figure(const FigureArgs& a, std::ostream& out) {
  PureEval f;
  if (a.figure == "fig1") {
    if (!(a.delta > 0.0)) throw ConfigError("--delta must be positive");
    const SpiralCounterexample sp(a.delta, a.extended);
    f = [sp](const Vector& x) { return spiral_eval(sp, x); };
  } else if (a.figure == "fig2") {
    const ChannelInstance c(Vector{0.3, 0.0}, -1.0);
    f = [c](const Vector& x) { return channel_eval(c, x); };
  } else if (a.figure == "fig3") {
    f = [](const Vector& x) { return warga_eval(x); };
  } else {
    throw ConfigError("unknown figure id '" + a.figure + "' (fig1, fig2, fig3)");
  }
  const std::vector<double> r = parse_numbers(a.range, ',', "--range");
  if (r.size() != 4 || !(r[0] < r[1]) || !(r[2] < r[3])) throw ConfigError("--range must be umin,umax,vmin,vmax");
  if (a.resolution < 2) throw ConfigError("--resolution must be at least 2");

  std::ostringstream csv;
  csv << "u,v,value\n";
  char buf[96];
  const double step_u = (r[1] - r[0]) / static_cast<double>(a.resolution - 1);
  const double step_v = (r[3] - r[2]) / static_cast<double>(a.resolution - 1);
  for (std::size_t i = 0; i < a.resolution; ++i) {
    const double u = r[0] + step_u * static_cast<double>(i);
    for (std::size_t k = 0; k < a.resolution; ++k) {
      const double v = r[2] + step_v * static_cast<double>(k);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", u, v, f(Vector{u, v}).value);
      csv << buf;
    }
  }
  if (a.output.empty()) {
    out << csv.str();
  } else {
    write_text(a.output, csv.str());
  }
  return kExitPass;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& exec_name,
               const std::string& configured_dir, std::ostream& out) {
  const Exec exec = parse_exec(exec_name);
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else if (std::find(suite_names().begin(), suite_names().end(), suite) != suite_names().end()) {
    names = {suite};
  } else {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  json reports = json::array();
  bool ok = true;
  for (const std::string& n : names) {
    const SuiteReport r = run_suite(n, seed, exec);
    for (const Check& c : r.checks) print_check(out, c, n + "/");
    out << "suite " << n << ": " << (r.all_pass() ? "pass" : "fail") << " (" << r.seconds << " s)\n";
    ok = ok && r.all_pass();
    reports.push_back(r.to_json());
  }
  const std::filesystem::path dir = output_dir(configured_dir);
  std::filesystem::create_directories(dir);
  write_text(dir / "verify_report.json",
             json{{"suite", suite}, {"seed", seed}, {"all_pass", ok}, {"suites", reports}}.dump(2) + "\n");
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for nonsmooth stationarity lower bounds", "statlab"};
  app.require_subcommand(1);

  ConfigOverrides run_opts;
  std::string run_exec = "parallel";
  CLI::App* run = app.add_subcommand("run", "play a configured experiment and write report.json");
  run_opts.attach(*run);
  run->add_option("--exec", run_exec, "serial | parallel");

  CertifyArgs cert_args;
  CLI::App* certify = app.add_subcommand("certify", "certify (near-)stationarity at a point");
  certify->add_option("--function", cert_args.function, "function spec (inline JSON or file)")->required();
  certify->add_option("--point", cert_args.point, "point, comma separated or JSON array")->required();
  certify->add_option("--notion", cert_args.notion, "eps | delta_eps");
  certify->add_option("--eps", cert_args.eps, "stationarity level");
  certify->add_option("--delta", cert_args.delta, "ball radius for delta_eps");
  certify->add_option("--samples", cert_args.samples, "uniform ball samples for delta_eps");
  certify->add_option("--stencil", cert_args.stencil, "explicit offsets 'a,b;c,d' instead of sampling");
  certify->add_option("--seed", cert_args.seed, "seed for ball sampling");

  ConfigOverrides adv_opts;
  CLI::App* adversary = app.add_subcommand("adversary", "build a hard channel instance and persist it");
  adv_opts.attach(*adversary);

  FigureArgs fig_args;
  CLI::App* figure = app.add_subcommand("figure-data", "CSV grid for fig1 | fig2 | fig3");
  figure->add_option("figure", fig_args.figure, "figure id")->required();
  figure->add_option("--range", fig_args.range, "umin,umax,vmin,vmax");
  figure->add_option("--resolution", fig_args.resolution, "grid points per axis");
  figure->add_option("--delta", fig_args.delta, "spiral scale for fig1");
  figure->add_flag("--extended", fig_args.extended, "use the globally Lipschitz extension for fig1");
  figure->add_option("--output", fig_args.output, "write CSV here instead of stdout");

  std::string suite;
  std::uint64_t verify_seed = 0;
  std::string verify_exec = "parallel";
  std::string verify_dir;
  CLI::App* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("suite", suite, "prop1 | channel | quadratic | remark | theorem1 | minnorm | smoothing | all")
      ->required();
  verify->add_option("--seed", verify_seed, "master seed");
  verify->add_option("--exec", verify_exec, "serial | parallel");
  verify->add_option("--output_path", verify_dir, "output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_opts, run_exec, out);
    if (*certify) return cmd_certify(cert_args, out);
    if (*adversary) return cmd_adversary(adv_opts, out);
    if (*figure) return cmd_figure(fig_args, out);
    if (*verify) return cmd_verify(suite, verify_seed, verify_exec, verify_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitConfig;
}

}  // namespace statlab
