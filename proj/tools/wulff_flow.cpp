// wulff-flow: command line front end.
//
//   wulff-flow run --preset exp1 --out DIR
//   wulff-flow run --epsilon 0.2 --n 500 --tau 1e-4 --horizon 3 --init hermite:0.7,0.4 --out DIR
//   wulff-flow sweep --epsilon 0.2 --radii 0.2:0.6:0.05 --perturb 0.01 --out DIR
//   wulff-flow check
//
// Exit status: 0 for SteadyCylinder / HorizonReached, 2 for Pinched, 1 on error.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wulff/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPinched = 2;

struct RunOptions {
  std::string preset;
  std::optional<double> epsilon;
  std::optional<long> intervals;
  std::optional<double> tau;
  std::optional<double> horizon;
  std::optional<std::string> init;
  std::optional<double> steady_tolerance;
  std::optional<double> pinch_tolerance;
  std::vector<double> snapshots;
  std::string out;
};

struct SweepOptions {
  double epsilon = 0.2;
  std::string radii = "0.2:0.6:0.05";
  double perturb = 0.01;
  int mode = 1;
  long intervals = 100;
  double tau = 1e-4;
  double horizon = 3.0;
  std::string out;
};

int do_run(const RunOptions& opt) {
  wulff::FlowConfig config = opt.preset.empty() ? wulff::FlowConfig{} : wulff::preset(opt.preset);
  if (opt.epsilon) config.epsilon = *opt.epsilon;
  if (opt.intervals) config.intervals = *opt.intervals;
  if (opt.tau) config.tau = *opt.tau;
  if (opt.horizon) config.horizon = *opt.horizon;
  if (opt.init) config.initial = wulff::parse_initial(*opt.init);
  if (opt.steady_tolerance) config.steady_tolerance = *opt.steady_tolerance;
  if (opt.pinch_tolerance) config.pinch_tolerance = *opt.pinch_tolerance;
  if (!opt.snapshots.empty()) config.snapshot_times = opt.snapshots;
  if (!opt.preset.empty() && (opt.epsilon || opt.intervals || opt.tau || opt.horizon || opt.init)) {
    config.published_parameters = false;
  }

  fmt::print("{}: eps={} N={} tau={} T={} init={} ({} steps)\n", config.name, config.epsilon, config.intervals,
             config.tau, config.horizon, wulff::describe(config.initial), config.step_count());
  const auto start = std::chrono::steady_clock::now();
  wulff::RunHistory history;
  try {
    history = wulff::run(config);
  } catch (const wulff::SolveFailure& e) {
    const std::string dump = opt.out + "/failed_state.csv";
    wulff::write_profile(e.state(), dump);
    std::cerr << "error: " << e.what() << " (state written to " << dump << ")\n";
    return kExitError;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  wulff::write_outputs(history, config, opt.out);

  const auto& o = history.outcome;
  fmt::print("outcome: {} at t={:.6g}", wulff::to_string(o.kind), o.time);
  if (o.kind == wulff::OutcomeKind::SteadyCylinder) fmt::print(" radius={:.6f}", o.radius);
  if (o.kind == wulff::OutcomeKind::Pinched) fmt::print(" z={:.4f}", o.z);
  fmt::print("\n");
  if (history.size() > 0) {
    const double v0 = history.volume.front();
    fmt::print("energy {:.8f} -> {:.8f}, volume {:.8f} -> {:.8f} (drift {:.3e} %)\n", history.energy.front(),
               history.energy.back(), v0, history.volume.back(), 100.0 * std::abs(history.volume.back() - v0) / v0);
  }
  fmt::print("{} steps in {:.1f} s, output in {}\n", history.steps_taken, seconds, opt.out);
  return o.kind == wulff::OutcomeKind::Pinched ? kExitPinched : kExitOk;
}

int do_sweep(const SweepOptions& opt) {
  wulff::SweepConfig config;
  config.epsilon = opt.epsilon;
  config.radii = wulff::parse_range(opt.radii);
  config.perturbation = opt.perturb;
  config.mode = opt.mode;
  config.intervals = opt.intervals;
  config.tau = opt.tau;
  config.horizon = opt.horizon;
  const auto result = wulff::sweep(config);
  wulff::write_sweep(result, config, opt.out);
  for (const auto& cell : result.cells) {
    fmt::print("R={:.4f}  {:<15} t={:.4g}\n", cell.radius, wulff::to_string(cell.outcome.kind), cell.outcome.time);
  }
  fmt::print("threshold_radius={:.6f} linearized_radius={:.6f} monotone={}\n", result.threshold_radius,
             result.linearized_radius, result.monotone);
  return result.monotone ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume-preserving anisotropic mean curvature flow of a drop between two plates"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run_cmd = app.add_subcommand("run", "Evolve one configuration and write history, snapshots and manifest");
  run_cmd->add_option("--preset", run_opt.preset, "exp1 .. exp7");
  run_cmd->add_option("--epsilon", run_opt.epsilon, "anisotropy strength in gamma = 1 + eps nu3^2");
  run_cmd->add_option("--n", run_opt.intervals, "number of spline intervals N");
  run_cmd->add_option("--tau", run_opt.tau, "time step");
  run_cmd->add_option("--horizon", run_opt.horizon, "final time T");
  run_cmd->add_option("--init", run_opt.init, "hermite:R0,R1 or cosine:MEAN,AMP,K");
  run_cmd->add_option("--steady-tol", run_opt.steady_tolerance, "steady threshold on max|dr|/tau");
  run_cmd->add_option("--pinch-tol", run_opt.pinch_tolerance, "radius treated as pinch-off");
  run_cmd->add_option("--snapshots", run_opt.snapshots, "times at which profiles are written");
  run_cmd->add_option("--out", run_opt.out, "output directory")->required();

  SweepOptions sweep_opt;
  auto* sweep_cmd = app.add_subcommand("sweep", "Perturbed-cylinder stability scan over radii");
  sweep_cmd->add_option("--epsilon", sweep_opt.epsilon, "anisotropy strength")->capture_default_str();
  sweep_cmd->add_option("--radii", sweep_opt.radii, "start:stop:step")->capture_default_str();
  sweep_cmd->add_option("--perturb", sweep_opt.perturb, "perturbation amplitude")->capture_default_str();
  sweep_cmd->add_option("--mode", sweep_opt.mode, "perturbation cos(mode pi z)")->capture_default_str();
  sweep_cmd->add_option("--n", sweep_opt.intervals, "number of spline intervals")->capture_default_str();
  sweep_cmd->add_option("--tau", sweep_opt.tau, "time step")->capture_default_str();
  sweep_cmd->add_option("--horizon", sweep_opt.horizon, "final time")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_opt.out, "output directory")->required();

  app.add_subcommand("check", "Run the built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run_opt);
    if (*sweep_cmd) return do_sweep(sweep_opt);
    return wulff::run_invariant_checks(std::cout) ? kExitOk : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
