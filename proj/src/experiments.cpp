#include "wulff/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "wulff/anisotropy.hpp"
#include "wulff/errors.hpp"
#include "wulff/geometry.hpp"
#include "wulff/spline.hpp"

namespace wulff {

namespace {

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text, char sep) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(sep, start), text.size());
    out.push_back(parse_double(text.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

}  // namespace

std::function<double(double)> hermite_initial(double r0, double r1) {
  if (!(r0 > 0.0) || !(r1 > 0.0)) {
    throw DomainError("Hermite profile needs positive end radii");
  }
  return [r0, r1](double z) { return r0 + (r1 - r0) * z * z * (3.0 - 2.0 * z); };
}

std::function<double(double)> cosine_initial(double mean, double amplitude, int wavenumber) {
  if (!(amplitude >= 0.0) || !(mean > amplitude)) {
    throw DomainError("cosine profile needs mean > amplitude >= 0");
  }
  if (wavenumber < 0) {
    throw DomainError("cosine profile needs a non-negative wavenumber");
  }
  const double k = wavenumber * std::numbers::pi;
  return [mean, amplitude, k](double z) { return mean + amplitude * std::cos(k * z); };
}

std::function<double(double)> profile_function(const InitialProfile& profile) {
  if (const auto* h = std::get_if<HermiteProfile>(&profile)) {
    return hermite_initial(h->r0, h->r1);
  }
  const auto& c = std::get<CosineProfile>(profile);
  return cosine_initial(c.mean, c.amplitude, c.wavenumber);
}

InitialProfile parse_initial(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("initial profile must look like hermite:R0,R1 or cosine:MEAN,AMP,K");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::vector<double> args = parse_list(text.substr(colon + 1), ',');
  if (kind == "hermite" && args.size() == 2) {
    return HermiteProfile{args[0], args[1]};
  }
  if (kind == "cosine" && args.size() == 3) {
    const double k = args[2];
    if (k != std::floor(k)) throw DomainError("cosine wavenumber must be an integer");
    return CosineProfile{args[0], args[1], static_cast<int>(k)};
  }
  throw DomainError("unrecognized initial profile '" + std::string(text) + "'");
}

std::string describe(const InitialProfile& profile) {
  if (const auto* h = std::get_if<HermiteProfile>(&profile)) {
    return "hermite:" + std::to_string(h->r0) + "," + std::to_string(h->r1);
  }
  const auto& c = std::get<CosineProfile>(profile);
  return "cosine:" + std::to_string(c.mean) + "," + std::to_string(c.amplitude) + "," + std::to_string(c.wavenumber);
}

void FlowConfig::validate() const {
  make_convex_model(epsilon);
  if (intervals < 4) throw DomainError("need N >= 4 intervals");
  if (!(tau > 0.0)) throw DomainError("time step must be positive");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be non-negative");
  if (!(pinch_tolerance >= 0.0)) throw DomainError("pinch tolerance must be non-negative");
  if (!(steady_tolerance >= 0.0)) throw DomainError("steady tolerance must be non-negative");
  if (max_records < 1) throw DomainError("max_records must be positive");
  gauss_legendre<double>(quadrature_points);
  profile_function(initial);  // validates the radii
}

Index FlowConfig::step_count() const {
  // A horizon that is an integer multiple of tau up to rounding gives exactly that many steps.
  return static_cast<Index>(std::ceil(horizon / tau - 1e-9));
}

FlowConfig preset(std::string_view name) {
  FlowConfig c;
  c.name = std::string(name);
  c.published_parameters = true;
  auto set = [&c](double eps, double T, Index N, double tau, InitialProfile init) {
    c.epsilon = eps;
    c.horizon = T;
    c.intervals = N;
    c.tau = tau;
    c.initial = init;
  };
  if (name == "exp1") {
    set(0.2, 3.0, 500, 1e-4, HermiteProfile{0.7, 0.4});
  } else if (name == "exp2") {
    set(0.2, 3.0, 500, 1e-5, HermiteProfile{0.4, 0.2});
  } else if (name == "exp3") {
    set(0.2, 3.0, 500, 1e-5, HermiteProfile{0.3, 0.2});
  } else if (name == "exp4") {
    set(0.2, 4.0, 1000, 1e-6, HermiteProfile{0.9, 0.1});
  } else if (name == "exp5") {
    set(0.4, 4.0, 500, 1e-5, HermiteProfile{0.3, 0.2});
  } else if (name == "exp6") {
    set(-0.2, 2.0, 500, 1e-4, HermiteProfile{0.8, 0.3});
  } else if (name == "exp7") {
    // Only eps and the initial profile are published for this case.
    set(0.2, 3.0, 500, 1e-4, CosineProfile{1.0, 0.25, 8});
    c.published_parameters = false;
  } else {
    throw DomainError("unknown preset '" + std::string(name) + "' (expected exp1..exp7)");
  }
  return c;
}

std::vector<std::string> preset_names() { return {"exp1", "exp2", "exp3", "exp4", "exp5", "exp6", "exp7"}; }

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::SteadyCylinder:
      return "SteadyCylinder";
    case OutcomeKind::Pinched:
      return "Pinched";
    case OutcomeKind::HorizonReached:
      return "HorizonReached";
  }
  return "Unknown";
}

FlowState<double> initial_state(const FlowConfig& config) {
  const auto f = profile_function(config.initial);
  const Vector<double> nodes = uniform_nodes<double>(config.intervals);
  Vector<double> values(nodes.size());
  for (Index j = 0; j < nodes.size(); ++j) values(j) = f(nodes(j));
  return FlowState<double>{0.0, fit_clamped(nodes, values, 0.0, 0.0), 0};
}

bool is_cylinder(double max_slope, double l2_residual, double energy) {
  return max_slope <= 1e-4 && l2_residual <= 1e-8 * energy;
}

namespace {

double max_abs_slope(const FlowState<double>& state) { return state.spline.slopes().cwiseAbs().maxCoeff(); }

class Recorder {
 public:
  Recorder(const AnisotropyModel<double>& model, const QuadratureRule<double>& rule, RunHistory& history,
           std::vector<double> snapshot_times)
      : model_(model), rule_(rule), history_(history), snapshot_times_(std::move(snapshot_times)) {
    std::sort(snapshot_times_.begin(), snapshot_times_.end());
  }

  IntegralReport<double> record(const FlowState<double>& state) {
    const auto report = integrals(model_, state.spline, rule_);
    if (last_recorded_ == state.step_index && !history_.times.empty()) return report;
    history_.times.push_back(state.time);
    history_.energy.push_back(report.energy);
    history_.volume.push_back(report.volume);
    history_.lambda_bar.push_back(report.lambda_bar);
    history_.l2_residual.push_back(report.l2_residual);
    history_.min_radius.push_back(report.min_radius);
    history_.max_slope.push_back(max_abs_slope(state));
    last_recorded_ = state.step_index;
    return report;
  }

  void snapshot_due(const FlowState<double>& state, double tau) {
    while (next_ < snapshot_times_.size() && snapshot_times_[next_] <= state.time + 0.5 * tau) {
      snapshot(state);
      ++next_;
    }
  }

  void snapshot(const FlowState<double>& state) {
    if (!history_.snapshots.empty() && history_.snapshots.back().time == state.time) return;
    history_.snapshots.push_back(
        {state.time, state.spline.nodes(), state.spline.values(), state.spline.slopes()});
  }

 private:
  const AnisotropyModel<double>& model_;
  const QuadratureRule<double>& rule_;
  RunHistory& history_;
  std::vector<double> snapshot_times_;
  std::size_t next_ = 0;
  Index last_recorded_ = -1;
};

}  // namespace

RunHistory run(const FlowConfig& config) {
  config.validate();
  const auto model = make_convex_model(config.epsilon);
  const auto rule = gauss_legendre<double>(config.quadrature_points);
  const Index steps = config.step_count();
  const Index record_every = std::max<Index>(1, (steps + config.max_records - 1) / config.max_records);

  std::vector<double> snapshot_times = config.snapshot_times;
  if (snapshot_times.empty()) {
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) snapshot_times.push_back(f * config.horizon);
  }

  RunHistory history;
  Recorder recorder(model, rule, history, snapshot_times);
  FlowState<double> state = initial_state(config);
  recorder.record(state);
  recorder.snapshot_due(state, config.tau);

  bool finished = false;
  for (Index k = 0; k < steps && !finished; ++k) {
    FlowState<double> next = state;
    try {
      next = step(model, state, config.tau, rule, 0.0, 0.0, config.pinch_tolerance);
    } catch (const PinchError& e) {
      history.outcome = {OutcomeKind::Pinched, static_cast<double>(state.step_index + 1) * config.tau, 0.0, e.z(),
                         e.what()};
      finished = true;
      break;
    } catch (const SingularSystemError& e) {
      throw SolveFailure(std::string("step ") + std::to_string(k + 1) + ": " + e.what(), state);
    }

    const double change = (next.spline.values() - state.spline.values()).cwiseAbs().maxCoeff();
    state = std::move(next);
    state.time = static_cast<double>(state.step_index) * config.tau;
    history.steps_taken = state.step_index;

    const double slope = max_abs_slope(state);
    if (slope > config.slope_limit) {
      Index where = 0;
      state.spline.slopes().cwiseAbs().maxCoeff(&where);
      history.outcome = {OutcomeKind::Pinched, state.time, 0.0, state.spline.nodes()(where),
                         "slope " + std::to_string(slope) + " exceeds limit"};
      finished = true;
      break;
    }

    try {
      if (change / config.tau <= config.steady_tolerance) {
        const auto report = recorder.record(state);
        if (is_cylinder(slope, report.l2_residual, report.energy)) {
          history.outcome = {OutcomeKind::SteadyCylinder, state.time, state.spline.values().mean(), 0.0,
                             "steady after " + std::to_string(state.step_index) + " steps"};
          finished = true;
          break;
        }
      }
      if ((k + 1) % record_every == 0 || k + 1 == steps) {
        recorder.record(state);
      }
    } catch (const PinchError& e) {
      history.outcome = {OutcomeKind::Pinched, state.time, 0.0, e.z(), e.what()};
      finished = true;
      break;
    }
    recorder.snapshot_due(state, config.tau);
  }

  if (!finished) {
    const auto report = recorder.record(state);
    if (is_cylinder(max_abs_slope(state), report.l2_residual, report.energy)) {
      history.outcome = {OutcomeKind::SteadyCylinder, state.time, state.spline.values().mean(), 0.0,
                         "cylindrical at the horizon"};
    } else {
      history.outcome = {OutcomeKind::HorizonReached, state.time, 0.0, 0.0, ""};
    }
  } else if (history.outcome.kind != OutcomeKind::Pinched) {
    recorder.record(state);
  }
  recorder.snapshot(state);
  return history;
}

std::vector<double> parse_range(std::string_view text) {
  const std::vector<double> parts = parse_list(text, ':');
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw DomainError("range must be start:stop:step with step > 0 and stop >= start");
  }
  std::vector<double> out;
  const auto count = static_cast<Index>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (Index i = 0; i <= count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return out;
}

namespace {

int outcome_rank(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Pinched:
      return 0;
    case OutcomeKind::HorizonReached:
      return 1;
    case OutcomeKind::SteadyCylinder:
      return 2;
  }
  return -1;
}

}  // namespace

SweepResult sweep(const SweepConfig& config) {
  const auto model = make_convex_model(config.epsilon);
  std::vector<double> radii = config.radii;
  std::sort(radii.begin(), radii.end());

  SweepResult result;
  result.threshold_radius = stability_threshold(model, 1.0);
  result.linearized_radius = linearized_stability_radius(model, 1.0);
  for (double radius : radii) {
    FlowConfig c;
    c.name = "sweep";
    c.epsilon = config.epsilon;
    c.intervals = config.intervals;
    c.tau = config.tau;
    c.horizon = config.horizon;
    c.initial = CosineProfile{radius, config.perturbation, config.mode};
    c.snapshot_times = {0.0};
    c.published_parameters = false;
    const RunHistory h = run(c);
    result.cells.push_back({radius, h.outcome, h.min_radius.empty() ? radius : h.min_radius.back()});
  }
  result.monotone = std::is_sorted(result.cells.begin(), result.cells.end(), [](const auto& a, const auto& b) {
    return outcome_rank(a.outcome.kind) < outcome_rank(b.outcome.kind);
  });
  return result;
}

}  // namespace wulff
