#include "neseek/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "neseek/demos.hpp"
#include "neseek/scenario.hpp"

namespace neseek {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_json(const RunReport& r) {
  json conditions = json::array();
  for (std::size_t i = 0; i < r.conditions.size(); ++i) {
    json checks = json::array();
    for (const auto& c : r.conditions[i].checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    conditions.push_back({{"agent", i + 1}, {"passed", r.conditions[i].all_passed()}, {"checks", checks}});
  }
  json doc;
  doc["scenario"] = r.scenario;
  doc["mode"] = r.mode;
  doc["conditions"] = conditions;
  doc["nash_equilibrium"] = std::vector<double>(r.nash.data(), r.nash.data() + r.nash.size());
  doc["settle_tolerance"] = r.settle_tolerance;
  doc["settling_time"] = r.settling_time ? json(*r.settling_time) : json(nullptr);
  doc["final_ne_dist"] = r.final_ne_dist;
  doc["final_rho_norm"] = r.final_rho_norm;
  doc["final_eta_err"] = r.final_eta_err;
  doc["outputs"] = {{"trajectory", r.trajectory_path}, {"report", r.report_path}};
  return doc.dump(2) + "\n";
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  if (!fs::exists(name_or_path)) {
    if (auto cfg = bundled_scenario(name_or_path)) return *cfg;
  }
  ScenarioConfig cfg = load_scenario(name_or_path);
  if (cfg.name.empty()) cfg.name = fs::path(name_or_path).stem().string();
  return cfg;
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

// Condition and network preconditions that are reported as condition failures (exit 3)
// rather than input errors.
void check_structure(const ScenarioConfig& cfg) {
  const auto cert = monotonicity_certificate(cfg.game);
  if (!cert.passes()) {
    throw ConditionFailure(fmt::format("game is not strongly monotone (mu = {:.6g})", cert.mu), {});
  }
  if (cfg.mode == Mode::kImperfect && !is_connected(cfg.graph)) {
    throw ConditionFailure("communication graph is not connected", {});
  }
}

}  // namespace

RunReport run_scenario(ScenarioConfig cfg, const RunOptions& options) {
  if (options.mode) cfg.mode = *options.mode;
  if (options.delta) cfg.delta = *options.delta;
  if (options.step) cfg.step = *options.step;
  if (options.horizon) cfg.horizon = *options.horizon;
  check_structure(cfg);

  RunReport report;
  report.scenario = cfg.name;
  report.mode = to_string(cfg.mode);
  report.conditions = verify_conditions(cfg);
  report.settle_tolerance = options.settle_tolerance;

  const Trajectory traj = integrate(cfg, !options.force);
  const Network net = build_network(cfg);
  report.nash = traj.nash;
  report.settling_time = settling_time(traj, options.settle_tolerance);
  report.final_ne_dist = traj.ne_dist.back();
  report.final_rho_norm = traj.rho_norm.back();
  report.final_eta_err = traj.eta_err.back();

  const fs::path dir(options.out_dir);
  fs::create_directories(dir);
  const fs::path csv = dir / (cfg.name + "_trajectory.csv");
  const fs::path json_path = dir / (cfg.name + "_report.json");
  report.trajectory_path = csv.string();
  report.report_path = json_path.string();

  std::ostringstream buf;
  write_csv(traj, net, buf);
  write_file(csv, buf.str());
  write_file(json_path, to_json(report));
  return report;
}

namespace {

void print_report(std::ostream& out, std::size_t agent, const ConditionReport& report) {
  for (const auto& c : report.checks) {
    fmt::print(out, "  agent {} {:<26} {}  {}\n", agent, c.name, c.passed ? "PASS" : "FAIL", c.detail);
  }
}

// Runs fn and converts library errors into exit codes, printing a one-line diagnostic.
template <typename Fn>
int guarded(std::ostream& err, const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    fmt::print(err, "{}: {}\n", what, e.what());
    return kExitParse;
  } catch (const ConditionFailure& e) {
    fmt::print(err, "{}: {}\n", what, e.what());
    return kExitCondition;
  } catch (const DivergenceError& e) {
    fmt::print(err, "{}: diverged at t = {:.6g}: {}\n", what, e.time(), e.what());
    return kExitDivergence;
  } catch (const PreconditionError& e) {
    fmt::print(err, "{}: {}\n", what, e.what());
    return kExitParse;
  } catch (const Error& e) {
    fmt::print(err, "{}: {}\n", what, e.what());
    return kExitCondition;
  } catch (const std::exception& e) {
    fmt::print(err, "{}: {}\n", what, e.what());
    return kExitIo;
  }
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  return guarded(err, path, [&] {
    const ScenarioConfig cfg = resolve_scenario(path);
    fmt::print(out, "scenario {} ({} agents, {} information)\n", cfg.name, cfg.agents.size(), to_string(cfg.mode));
    bool ok = true;
    const auto reports = verify_conditions(cfg);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      print_report(out, i + 1, reports[i]);
      ok = ok && reports[i].all_passed();
    }
    const auto cert = monotonicity_certificate(cfg.game);
    fmt::print(out, "  game    {:<26} {}  mu = {:.6g}, theta = {:.6g}\n", "monotonicity", cert.passes() ? "PASS" : "FAIL", cert.mu, cert.theta);
    const bool connected = is_connected(cfg.graph);
    fmt::print(out, "  graph   {:<26} {}  {} nodes, {} edges\n", "connectivity", connected ? "PASS" : "FAIL", cfg.graph.size(), cfg.graph.edges().size());
    ok = ok && cert.passes() && connected;
    fmt::print(out, "{}\n", ok ? "all conditions pass" : "conditions FAILED");
    return ok ? kExitOk : kExitCondition;
  });
}

int cmd_ne(const std::string& path, std::ostream& out, std::ostream& err) {
  return guarded(err, path, [&] {
    const ScenarioConfig cfg = resolve_scenario(path);
    const auto cert = monotonicity_certificate(cfg.game);
    if (!cert.passes()) {
      throw ConditionFailure(fmt::format("game is not strongly monotone (mu = {:.6g}); no unique equilibrium", cert.mu), {});
    }
    const Vector y = nash_equilibrium(cfg.game);
    for (Eigen::Index i = 0; i < y.size(); ++i) fmt::print(out, "y*_{} = {:.12g}\n", i + 1, y[i]);
    fmt::print(out, "||phi(y*)||_inf = {:.3e}\n", cfg.game.pseudo_gradient(y).cwiseAbs().maxCoeff());
    return kExitOk;
  });
}

int run_one(const std::string& path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, path, [&] {
    const RunReport r = run_scenario(resolve_scenario(path), options);
    fmt::print(out, "scenario {} ({} information)\n", r.scenario, r.mode);
    if (r.settling_time) {
      fmt::print(out, "  settling time (ne_dist <= {:g}): {:.6g} s\n", r.settle_tolerance, *r.settling_time);
    } else {
      fmt::print(out, "  settling time (ne_dist <= {:g}): not reached\n", r.settle_tolerance);
    }
    fmt::print(out, "  final ne_dist  = {:.6e}\n", r.final_ne_dist);
    fmt::print(out, "  final rho_norm = {:.6e}\n", r.final_rho_norm);
    fmt::print(out, "  final eta_err  = {:.6e}\n", r.final_eta_err);
    fmt::print(out, "  wrote {}\n  wrote {}\n", r.trajectory_path, r.report_path);
    return kExitOk;
  });
}

int cmd_run(const std::vector<std::string>& paths, const RunOptions& options, bool batch, std::ostream& out, std::ostream& err) {
  struct Captured {
    int code;
    std::string out, err;
  };
  auto task = [&options](const std::string& path) {
    std::ostringstream o, e;
    const int code = run_one(path, options, o, e);
    return Captured{code, o.str(), e.str()};
  };

  std::vector<Captured> results;
  if (batch) {
    std::vector<std::future<Captured>> futures;
    for (const auto& p : paths) futures.push_back(std::async(std::launch::async, task, p));
    for (auto& f : futures) results.push_back(f.get());
  } else {
    for (const auto& p : paths) results.push_back(task(p));
  }
  int code = kExitOk;
  for (const auto& r : results) {
    out << r.out;
    err << r.err;
    code = std::max(code, r.code);
  }
  return code;
}

int cmd_demo(const std::vector<std::string>& names, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, "demo", [&] {
    const auto selected = names.empty() ? bundled_scenario_names() : names;
    fs::create_directories(out_dir);
    for (const auto& name : selected) {
      const auto cfg = bundled_scenario(name);
      if (!cfg) throw ConfigError(fmt::format("unknown demo '{}' (expected example1 or example2)", name), "");
      const fs::path path = fs::path(out_dir) / (name + ".json");
      save_scenario(*cfg, path.string());
      fmt::print(out, "wrote {}\n", path.string());
    }
    return kExitOk;
  });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nash equilibrium seeking for aggregative games over linear agents", "neseek"};
  app.require_subcommand(1);

  std::string config;
  auto* validate = app.add_subcommand("validate", "check the convergence conditions of a scenario");
  validate->add_option("config", config, "scenario file or bundled name")->required();

  auto* ne = app.add_subcommand("ne", "print the Nash equilibrium of a scenario's game");
  ne->add_option("config", config, "scenario file or bundled name")->required();

  std::vector<std::string> configs;
  std::string mode_text;
  double delta = 0, step = 0, horizon = 0;
  RunOptions options;
  bool batch = false;
  auto* run = app.add_subcommand("run", "simulate a scenario and write its trajectory and report");
  run->add_option("config", configs, "scenario files or bundled names")->required();
  auto* mode_opt = run->add_option("--mode", mode_text, "override the strategy rule")->check(CLI::IsMember({"perfect", "imperfect"}));
  auto* delta_opt = run->add_option("--delta", delta, "override the consensus time scale")->check(CLI::PositiveNumber);
  auto* step_opt = run->add_option("--step", step, "override the integration step")->check(CLI::PositiveNumber);
  auto* horizon_opt = run->add_option("--horizon", horizon, "override the simulated horizon")->check(CLI::PositiveNumber);
  run->add_option("--out", options.out_dir, "output directory");
  run->add_flag("--force", options.force, "run even if the convergence conditions fail");
  run->add_flag("--batch", batch, "run several scenarios concurrently");
  run->add_option("--settle-tol", options.settle_tolerance, "ne_dist tolerance for the settling time")->check(CLI::PositiveNumber);

  std::vector<std::string> demo_names;
  std::string demo_out = ".";
  auto* demo = app.add_subcommand("demo", "write the bundled example scenarios as files");
  demo->add_option("names", demo_names, "example1 and/or example2 (default both)");
  demo->add_option("--out", demo_out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  if (validate->parsed()) return cmd_validate(config, out, err);
  if (ne->parsed()) return cmd_ne(config, out, err);
  if (demo->parsed()) return cmd_demo(demo_names, demo_out, out, err);

  if (*mode_opt) options.mode = parse_mode(mode_text);
  if (*delta_opt) options.delta = delta;
  if (*step_opt) options.step = step;
  if (*horizon_opt) options.horizon = horizon;
  return cmd_run(configs, options, batch, out, err);
}

}  // namespace neseek
