#ifndef WULFF_EXPERIMENTS_HPP
#define WULFF_EXPERIMENTS_HPP

// Run orchestration for drops between the plates z = 0 and z = 1 with
// orthogonal contact (alpha = beta = 0): presets, outcome classification,
// parameter sweeps and on-disk output.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wulff/numerics.hpp"
#include "wulff/stepper.hpp"

namespace wulff {

inline constexpr std::string_view kVersion = "0.1.0";

/// r0 + (r1 - r0)(3z^2 - 2z^3): the cubic with r(0)=r0, r(1)=r1 and flat ends.
struct HermiteProfile {
  double r0;
  double r1;
};

/// mean + amplitude cos(k pi z); the slope vanishes at both plates for integer k.
struct CosineProfile {
  double mean;
  double amplitude;
  int wavenumber;
};

using InitialProfile = std::variant<HermiteProfile, CosineProfile>;

std::function<double(double)> hermite_initial(double r0, double r1);
std::function<double(double)> cosine_initial(double mean, double amplitude, int wavenumber);
std::function<double(double)> profile_function(const InitialProfile& profile);

/// "hermite:R0,R1" or "cosine:MEAN,AMPLITUDE,K".
InitialProfile parse_initial(std::string_view text);
std::string describe(const InitialProfile& profile);

struct FlowConfig {
  std::string name = "custom";
  double epsilon = 0.2;
  Index intervals = 500;
  double tau = 1e-4;
  double horizon = 3.0;
  InitialProfile initial = HermiteProfile{0.7, 0.4};
  std::vector<double> snapshot_times;  // empty: 0, T/4, T/2, 3T/4, T
  double pinch_tolerance = 1e-3;
  double steady_tolerance = 1e-6;  // on max_n |r_n^{k+1} - r_n^k| / tau
  double slope_limit = 1e3;        // |r_z| beyond this counts as a singularity
  int quadrature_points = 4;
  Index max_records = 1000;
  bool published_parameters = false;  // true for presets whose T, N and tau are all published values

  /// Throws DomainError / InvalidModelError on an unusable configuration.
  void validate() const;
  Index step_count() const;
};

FlowConfig preset(std::string_view name);
std::vector<std::string> preset_names();

enum class OutcomeKind { SteadyCylinder, Pinched, HorizonReached };

std::string_view to_string(OutcomeKind kind);

struct RunOutcome {
  OutcomeKind kind = OutcomeKind::HorizonReached;
  double time = 0.0;
  double radius = 0.0;  // SteadyCylinder: mean nodal radius
  double z = 0.0;       // Pinched: location
  std::string detail;
};

struct ProfileSnapshot {
  double time;
  Vector<double> z;
  Vector<double> r;
  Vector<double> r_z;
};

struct RunHistory {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> volume;
  std::vector<double> lambda_bar;
  std::vector<double> l2_residual;
  std::vector<double> min_radius;
  std::vector<double> max_slope;
  std::vector<ProfileSnapshot> snapshots;
  RunOutcome outcome;
  Index steps_taken = 0;

  std::size_t size() const { return times.size(); }
};

/// A step whose linear solve failed; carries the last good state.
class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& what, FlowState<double> state)
      : std::runtime_error(what), state_(std::move(state)) {}
  const FlowState<double>& state() const { return state_; }

 private:
  FlowState<double> state_;
};

FlowState<double> initial_state(const FlowConfig& config);

/// True when the profile is a cylinder to within the run tolerances:
/// max |r_z| <= 1e-4 and l2_residual <= 1e-8 * energy.
bool is_cylinder(double max_slope, double l2_residual, double energy);

RunHistory run(const FlowConfig& config);

/// history.csv, snapshots/profile_<time>.csv and manifest.json under out_dir.
void write_outputs(const RunHistory& history, const FlowConfig& config, const std::filesystem::path& out_dir);

/// Writes the nodal data of a state as z,r,r_z.
void write_profile(const FlowState<double>& state, const std::filesystem::path& file);

struct SweepConfig {
  double epsilon = 0.2;
  std::vector<double> radii;
  double perturbation = 0.01;
  int mode = 1;  // perturbation cos(mode * pi * z)
  Index intervals = 100;
  double tau = 1e-4;
  double horizon = 3.0;
};

struct SweepCell {
  double radius;
  RunOutcome outcome;
  double final_min_radius;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  double threshold_radius;
  double linearized_radius;
  /// Outcomes ordered Pinched < HorizonReached < SteadyCylinder are
  /// non-decreasing in the radius.
  bool monotone;
};

/// "start:stop:step", inclusive of stop up to rounding.
std::vector<double> parse_range(std::string_view text);

SweepResult sweep(const SweepConfig& config);
void write_sweep(const SweepResult& result, const SweepConfig& config, const std::filesystem::path& out_dir);

/// Quick self-test of the numerical invariants; prints one line per check.
bool run_invariant_checks(std::ostream& out);

}  // namespace wulff

#endif  // WULFF_EXPERIMENTS_HPP
