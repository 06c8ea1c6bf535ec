#include "hinge_cli/cli.hpp"

#include "hinge/config.hpp"
#include "hinge/report_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace hinge::cli {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::string out;
  std::string method;
  double dt = 0.0;
  int k = 0;
  unsigned seed = 0;  // reserved; every pipeline is deterministic
  CLI::Option* dt_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* method_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config, "JSON run configuration")->required();
  c.out_opt = sub->add_option("-o,--out", c.out, "output directory (overrides outputs.directory)");
  c.method_opt = sub->add_option("--method", c.method, "integrator override")
                     ->check(CLI::IsMember({"splitting", "rk4"}));
  c.dt_opt = sub->add_option("--dt", c.dt, "time step override");
  c.k_opt = sub->add_option("--k", c.k, "mode count override");
  sub->add_option("--seed", c.seed, "reserved, unused");
}

RunConfig load(const Common& c, ConfigMode mode = ConfigMode::Run) {
  std::ifstream in(c.config);
  if (!in) throw ConfigError("<document>", "cannot open config file " + c.config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("<document>", "expected a JSON object");
  if (c.method_opt->count()) j["method"] = c.method;
  if (c.dt_opt->count()) j["dt"] = c.dt;
  if (c.k_opt->count()) {
    j["k"] = c.k;
    // a fixed node count sized for the old k would under-resolve the new one
    if (j.contains("quadrature") && j["quadrature"].is_object()) j["quadrature"].erase("nodes");
  }
  return parse_config_text(j.dump(), mode);
}

fs::path output_dir(const Common& c, const RunConfig& cfg) {
  fs::path dir = c.out_opt->count() ? fs::path(c.out) : fs::path(cfg.out_directory);
  fs::create_directories(dir);
  return dir;
}

fs::path named(const fs::path& dir, const RunConfig& cfg, const std::string& suffix) {
  return dir / (cfg.out_prefix + "_" + suffix);
}

void write_study(const StudyReport& rep, const fs::path& dir, const RunConfig& cfg) {
  const auto tables = study_tables(rep);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    write_csv(tables[i], named(dir, cfg, rep.study_id + "_" + rep.ladders[i].parameter + ".csv"));
  }
  write_text(named(dir, cfg, rep.study_id + ".json"), study_json(rep));
}

void print_rates(const StudyReport& rep, std::ostream& out) {
  out << rep.study_id << (rep.passed ? " passed" : " FAILED") << '\n';
  for (const auto& [name, v] : rep.rates) out << "  " << name << " = " << format_double(v) << '\n';
  for (const auto& [name, v] : rep.constants) {
    out << "  " << name << " = " << format_double(v) << '\n';
  }
}

int cmd_solve(const Common& c, std::ostream& out) {
  const RunConfig cfg = load(c);
  const fs::path dir = output_dir(c, cfg);
  const Run r = run(to_setup(cfg));
  write_csv(trajectory_table(*r.system, r.trajectory), named(dir, cfg, "trajectory.csv"));
  write_csv(snapshot_table(*r.system, r.trajectory.states.front()),
            named(dir, cfg, "snapshot_initial.csv"));
  write_csv(snapshot_table(*r.system, r.trajectory.states.back()),
            named(dir, cfg, "snapshot_final.csv"));
  write_text(named(dir, cfg, "config.json"), config_to_json(cfg));
  out << "solve: " << r.trajectory.states.size() << " states to t = "
      << format_double(r.trajectory.states.back().t) << " in " << dir.string() << '\n';
  return kPass;
}

int cmd_verify(const Common& c, std::ostream& out) {
  const RunConfig cfg = load(c);
  const fs::path dir = output_dir(c, cfg);
  const Run r = run(to_setup(cfg));
  std::vector<BoundReport> reports;
  for (Bound b : {Bound::Step2, Bound::Step3, Bound::Step4, Bound::H4Recovery}) {
    reports.push_back(check_apriori_bounds(*r.system, r.trajectory, b));
  }
  bool ok = true;
  for (const auto& rep : reports) {
    write_csv(bound_table(rep), named(dir, cfg, std::string(to_string(rep.bound)) + ".csv"));
    out << to_string(rep.bound) << (rep.passed ? " passed" : " FAILED")
        << " min_margin=" << format_double(rep.min_margin()) << '\n';
    ok = ok && rep.passed;
  }
  write_text(named(dir, cfg, "bounds.json"), bounds_json(reports));
  return ok ? kPass : kGateFailed;
}

int cmd_converge(const Common& c, const std::vector<int>& ladder, std::ostream& out) {
  const RunConfig cfg = load(c);
  const fs::path dir = output_dir(c, cfg);
  const StudyReport rep = convergence_study(to_setup(cfg), ladder);
  write_study(rep, dir, cfg);
  print_rates(rep, out);
  return rep.passed ? kPass : kGateFailed;
}

int cmd_unique(const Common& c, double eps, int mode, std::ostream& out) {
  const RunConfig cfg = load(c);
  const fs::path dir = output_dir(c, cfg);
  const StudyReport rep = uniqueness_experiment(to_setup(cfg), eps, mode);
  write_study(rep, dir, cfg);
  print_rates(rep, out);
  return rep.passed ? kPass : kGateFailed;
}

struct MmsArgs {
  std::string id = "sine_cos";
  std::vector<int> k_ladder;
  std::vector<double> dt_ladder;
  double max_error = 0.0;
  CLI::Option* max_error_opt = nullptr;
  bool no_order_gate = false;
};

int cmd_mms(const Common& c, const MmsArgs& a, std::ostream& out) {
  const RunConfig cfg = load(c);
  const fs::path dir = output_dir(c, cfg);
  std::vector<int> ks = a.k_ladder.empty() ? std::vector<int>{cfg.k} : a.k_ladder;
  std::vector<double> dts = a.dt_ladder;
  if (dts.empty()) dts = {4.0 * cfg.dt, 2.0 * cfg.dt, cfg.dt};
  MmsOptions opts;
  opts.gate_orders = !a.no_order_gate;
  if (a.max_error_opt->count()) opts.max_error = a.max_error;
  const StudyReport rep = mms_study(to_setup(cfg), a.id, ks, dts, opts);
  write_study(rep, dir, cfg);
  print_rates(rep, out);
  return rep.passed ? kPass : kGateFailed;
}

struct ValidateArgs {
  double lo = -10.0;
  double hi = 10.0;
  int samples = 1001;
};

int cmd_validate(const Common& c, const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load(c, ConfigMode::Audit);
  const fs::path dir = output_dir(c, cfg);
  const ProblemSetup s = to_setup(cfg);
  const HypothesisReport rep = validate_hypotheses(s.f1, s.f2, a.lo, a.hi, a.samples);
  write_text(named(dir, cfg, "hypotheses.json"), hypothesis_json(rep));
  if (rep.passed) {
    out << "validate passed: f1=" << s.f1.id << " f2=" << s.f2.id << '\n';
    return kPass;
  }
  err << "validate FAILED: " << rep.violations.size() << " violations\n";
  std::size_t shown = 0;
  for (const auto& v : rep.violations) {
    if (++shown > 20) {
      err << "  ...\n";
      break;
    }
    err << "  s=" << format_double(v.s) << ' ' << v.quantity << '=' << format_double(v.value)
        << '\n';
  }
  return kGateFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hinged-beam spectral Galerkin solver and estimate auditor", "hinge"};
  app.require_subcommand(1);

  std::array<Common, 6> common;
  auto* solve = app.add_subcommand("solve", "integrate and write trajectory + snapshots");
  auto* verify = app.add_subcommand("verify", "audit the a priori energy bounds");
  auto* converge = app.add_subcommand("converge", "Galerkin Cauchy ladder in k");
  auto* unique = app.add_subcommand("unique", "perturbation experiment with Gronwall envelope");
  auto* mms = app.add_subcommand("mms", "manufactured-solution error study");
  auto* validate = app.add_subcommand("validate", "sampled check of the nonlinearity hypotheses");
  const std::array<CLI::App*, 6> subs{solve, verify, converge, unique, mms, validate};
  for (std::size_t i = 0; i < subs.size(); ++i) add_common(subs[i], common[i]);

  std::vector<int> ladder{4, 8, 16, 32};
  converge->add_option("--ladder", ladder, "k values, comma separated")->delimiter(',');

  double eps = 1e-6;
  int mode = 1;
  unique->add_option("--eps", eps, "perturbation size")->check(CLI::NonNegativeNumber);
  unique->add_option("--mode", mode, "perturbed mode (1-based)");

  MmsArgs mms_args;
  mms->add_option("--manufactured", mms_args.id, "manufactured solution id");
  mms->add_option("--k-ladder", mms_args.k_ladder, "k values")->delimiter(',');
  mms->add_option("--dt-ladder", mms_args.dt_ladder, "decreasing time steps")->delimiter(',');
  mms_args.max_error_opt = mms->add_option("--max-error", mms_args.max_error, "error gate");
  mms->add_flag("--no-order-gate", mms_args.no_order_gate, "report temporal orders only");

  ValidateArgs val;
  validate->add_option("--lo", val.lo, "sample range start");
  validate->add_option("--hi", val.hi, "sample range end");
  validate->add_option("--samples", val.samples, "grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kConfigError;
  }

  try {
    if (*solve) return cmd_solve(common[0], out);
    if (*verify) return cmd_verify(common[1], out);
    if (*converge) return cmd_converge(common[2], ladder, out);
    if (*unique) return cmd_unique(common[3], eps, mode, out);
    if (*mms) return cmd_mms(common[4], mms_args, out);
    return cmd_validate(common[5], val, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::out_of_range& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kGateFailed;
  }
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace hinge::cli
