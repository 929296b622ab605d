#include <cmath>
#include <fstream>
#include <string>
#include <system_error>

#include <fmt/format.h>
#include <json.hpp>

#include "wulff/anisotropy.hpp"
#include "wulff/experiments.hpp"
#include "wulff/geometry.hpp"

namespace wulff {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_for_write(const fs::path& file) {
  std::ofstream out(file);
  if (!out) {
    throw std::runtime_error("cannot open " + file.string() + " for writing");
  }
  return out;
}

void create_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
  }
}

void finish(std::ofstream& out, const fs::path& file) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

void write_profile_rows(std::ofstream& out, const Vector<double>& z, const Vector<double>& r,
                        const Vector<double>& r_z) {
  out << "z,r,r_z\n";
  for (Index j = 0; j < z.size(); ++j) {
    out << fmt::format("{:.17g},{:.17g},{:.17g}\n", z(j), r(j), r_z(j));
  }
}

json outcome_json(const RunOutcome& o) {
  json j{{"kind", std::string(to_string(o.kind))}, {"time", o.time}};
  if (o.kind == OutcomeKind::SteadyCylinder) j["radius"] = o.radius;
  if (o.kind == OutcomeKind::Pinched) j["z"] = o.z;
  if (!o.detail.empty()) j["detail"] = o.detail;
  return j;
}

json initial_json(const InitialProfile& profile) {
  if (const auto* h = std::get_if<HermiteProfile>(&profile)) {
    return {{"kind", "hermite"}, {"r0", h->r0}, {"r1", h->r1}};
  }
  const auto& c = std::get<CosineProfile>(profile);
  return {{"kind", "cosine"}, {"mean", c.mean}, {"amplitude", c.amplitude}, {"wavenumber", c.wavenumber}};
}

json config_json(const FlowConfig& c) {
  return {{"name", c.name},
          {"epsilon", c.epsilon},
          {"N", c.intervals},
          {"tau", c.tau},
          {"T", c.horizon},
          {"initial", initial_json(c.initial)},
          {"snapshot_times", c.snapshot_times},
          {"pinch_tolerance", c.pinch_tolerance},
          {"steady_tolerance", c.steady_tolerance},
          {"slope_limit", c.slope_limit},
          {"quadrature_points", c.quadrature_points},
          {"max_records", c.max_records},
          {"published_parameters", c.published_parameters}};
}

}  // namespace

void write_profile(const FlowState<double>& state, const fs::path& file) {
  if (file.has_parent_path()) create_dirs(file.parent_path());
  auto out = open_for_write(file);
  write_profile_rows(out, state.spline.nodes(), state.spline.values(), state.spline.slopes());
  finish(out, file);
}

void write_outputs(const RunHistory& history, const FlowConfig& config, const fs::path& out_dir) {
  create_dirs(out_dir / "snapshots");

  const fs::path history_file = out_dir / "history.csv";
  {
    auto out = open_for_write(history_file);
    out << "time,energy,volume,lambda_bar,l2_residual,min_radius,max_slope\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
      out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", history.times[i],
                         history.energy[i], history.volume[i], history.lambda_bar[i], history.l2_residual[i],
                         history.min_radius[i], history.max_slope[i]);
    }
    finish(out, history_file);
  }

  for (const auto& snap : history.snapshots) {
    const fs::path file = out_dir / "snapshots" / fmt::format("profile_{:.6f}.csv", snap.time);
    auto out = open_for_write(file);
    write_profile_rows(out, snap.z, snap.r, snap.r_z);
    finish(out, file);
  }

  json manifest;
  manifest["code_version"] = std::string(kVersion);
  manifest["config"] = config_json(config);
  manifest["outcome"] = outcome_json(history.outcome);
  manifest["steps_taken"] = history.steps_taken;
  manifest["threshold_radius"] = stability_threshold(make_convex_model(config.epsilon), 1.0);
  if (history.size() > 0) {
    const double v0 = history.volume.front();
    const double v1 = history.volume.back();
    manifest["initial_volume"] = v0;
    manifest["final_volume"] = v1;
    manifest["final_energy"] = history.energy.back();
    manifest["volume_drift_percent"] = 100.0 * std::abs(v1 - v0) / v0;
  } else {
    manifest["initial_volume"] = nullptr;
    manifest["final_volume"] = nullptr;
    manifest["final_energy"] = nullptr;
    manifest["volume_drift_percent"] = nullptr;
  }

  const fs::path manifest_file = out_dir / "manifest.json";
  auto out = open_for_write(manifest_file);
  out << manifest.dump(2) << '\n';
  finish(out, manifest_file);
}

void write_sweep(const SweepResult& result, const SweepConfig& config, const fs::path& out_dir) {
  create_dirs(out_dir);
  const fs::path file = out_dir / "sweep.csv";
  auto out = open_for_write(file);
  out << "radius,outcome,end_time,final_min_radius,threshold_radius,linearized_radius\n";
  for (const auto& cell : result.cells) {
    out << fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", cell.radius, to_string(cell.outcome.kind),
                       cell.outcome.time, cell.final_min_radius, result.threshold_radius, result.linearized_radius);
  }
  finish(out, file);

  json manifest{{"code_version", std::string(kVersion)},
                {"epsilon", config.epsilon},
                {"perturbation", config.perturbation},
                {"mode", config.mode},
                {"N", config.intervals},
                {"tau", config.tau},
                {"T", config.horizon},
                {"threshold_radius", result.threshold_radius},
                {"linearized_radius", result.linearized_radius},
                {"monotone", result.monotone}};
  const fs::path manifest_file = out_dir / "sweep.json";
  auto mout = open_for_write(manifest_file);
  mout << manifest.dump(2) << '\n';
  finish(mout, manifest_file);
}

}  // namespace wulff
