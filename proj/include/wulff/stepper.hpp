#ifndef WULFF_STEPPER_HPP
#define WULFF_STEPPER_HPP

// Semi-implicit backward Euler stepping of
//   r_t = (Lambda - lambda_bar) sqrt(1 + r_z^2)
// on a clamped cubic spline. The second-derivative term is taken at the new
// time level; mu1, mu2, the slopes, 1/r and lambda_bar are lagged.
//
// Unknowns x = (r_1..r_{N+1}; d_2..d_N) and equations are stored in block
// order: continuity rows (one per interior node) first, then one evolution
// row per node. The solver receives an interleaved ordering
// (r_1 | r_2 d_2 | ... | r_N d_N | r_{N+1}) which bands the matrix with three
// sub- and three super-diagonals.

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "wulff/anisotropy.hpp"
#include "wulff/errors.hpp"
#include "wulff/geometry.hpp"
#include "wulff/numerics.hpp"
#include "wulff/spline.hpp"

namespace wulff {

template <typename Scalar>
struct FlowState {
  Scalar time;
  ClampedSpline<Scalar> spline;
  Index step_index = 0;
};

template <typename Scalar>
struct StepCoefficients {
  Vector<Scalar> q;    // 1 + (r_z)_n^2
  Vector<Scalar> xi;   // tau / (mu1 q)
  Vector<Scalar> eta;  // -(1 / (mu2 r) + lambda_bar sqrt(q)) tau
  Scalar lambda_bar;
};

template <typename Scalar>
StepCoefficients<Scalar> compute_coefficients(const AnisotropyModel<Scalar>& model, const FlowState<Scalar>& state,
                                              Scalar tau, const QuadratureRule<Scalar>& rule) {
  using std::sqrt;
  const auto& spline = state.spline;
  const Index nodes = spline.nodes().size();
  for (Index j = 0; j < nodes; ++j) {
    if (!(spline.values()(j) > Scalar(0))) {
      throw PinchError("nodal radius is not positive", static_cast<double>(spline.nodes()(j)),
                       static_cast<double>(spline.values()(j)));
    }
  }

  StepCoefficients<Scalar> c;
  c.lambda_bar = lambda_bar(model, spline, rule);
  c.q.resize(nodes);
  c.xi.resize(nodes);
  c.eta.resize(nodes);
  for (Index j = 0; j < nodes; ++j) {
    const Scalar slope = spline.slopes()(j);
    const Scalar q = Scalar(1) + slope * slope;
    const Scalar nu3 = -slope / sqrt(q);
    c.q(j) = q;
    c.xi(j) = tau / (mu1(model, nu3) * q);
    c.eta(j) = -(Scalar(1) / (mu2(model, nu3) * spline.values()(j)) + c.lambda_bar * sqrt(q)) * tau;
  }
  return c;
}

/// Column of r_{j+1} (0-based node j) in the block-ordered unknown vector.
inline Index radius_unknown(Index /*intervals*/, Index j) { return j; }
/// Column of the interior slope d_{j+1}, 1 <= j <= N-1.
inline Index slope_unknown(Index intervals, Index j) { return intervals + j; }
/// Row of the continuity equation at interior node j.
inline Index continuity_row(Index /*intervals*/, Index j) { return j - 1; }
/// Row of the evolution equation at node j.
inline Index evolution_row(Index intervals, Index j) { return intervals - 1 + j; }

template <typename Scalar>
SparseSystem<Scalar> assemble(const FlowState<Scalar>& state, const StepCoefficients<Scalar>& c, Scalar alpha,
                              Scalar beta) {
  const auto& spline = state.spline;
  const Index N = spline.intervals();
  const auto& r = spline.values();
  SparseSystem<Scalar> sys(2 * N);
  sys.entries.reserve(static_cast<std::size_t>(14 * N));

  // Continuity of S'' at interior nodes.
  for (Index j = 1; j < N; ++j) {
    const Index row = continuity_row(N, j);
    const Scalar hl = spline.width(j - 1);
    const Scalar hr = spline.width(j);
    sys.add(row, radius_unknown(N, j - 1), Scalar(3) * hr / hl);
    sys.add(row, radius_unknown(N, j), Scalar(3) * (hl / hr - hr / hl));
    sys.add(row, radius_unknown(N, j + 1), Scalar(-3) * hl / hr);
    sys.add(row, slope_unknown(N, j), Scalar(2) * (hl + hr));
    if (j - 1 == 0) {
      sys.rhs(row) -= hr * alpha;
    } else {
      sys.add(row, slope_unknown(N, j - 1), hr);
    }
    if (j + 1 == N) {
      sys.rhs(row) -= hl * beta;
    } else {
      sys.add(row, slope_unknown(N, j + 1), hl);
    }
  }

  // h (r^{k+1} - xi S''^{k+1}) = h (eta + r^k), with S'' from the right segment.
  for (Index j = 0; j < N; ++j) {
    const Index row = evolution_row(N, j);
    const Scalar h = spline.width(j);
    const Scalar xi = c.xi(j);
    sys.add(row, radius_unknown(N, j), h + Scalar(6) * xi / h);
    sys.add(row, radius_unknown(N, j + 1), Scalar(-6) * xi / h);
    sys.rhs(row) = h * (c.eta(j) + r(j));
    if (j == 0) {
      sys.rhs(row) -= Scalar(4) * alpha * xi;
    } else {
      sys.add(row, slope_unknown(N, j), Scalar(4) * xi);
    }
    if (j + 1 == N) {
      sys.rhs(row) -= Scalar(2) * beta * xi;
    } else {
      sys.add(row, slope_unknown(N, j + 1), Scalar(2) * xi);
    }
  }
  // Last node: S'' from the left segment, scaled by h_N.
  {
    const Index row = evolution_row(N, N);
    const Scalar h = spline.width(N - 1);
    const Scalar xi = c.xi(N);
    sys.add(row, radius_unknown(N, N), h + Scalar(6) * xi / h);
    sys.add(row, radius_unknown(N, N - 1), Scalar(-6) * xi / h);
    sys.rhs(row) = h * (c.eta(N) + r(N)) + Scalar(4) * beta * xi;
    if (N - 1 == 0) {
      sys.rhs(row) += Scalar(2) * alpha * xi;
    } else {
      sys.add(row, slope_unknown(N, N - 1), Scalar(-2) * xi);
    }
  }

  sys.row_order.assign(static_cast<std::size_t>(2 * N), 0);
  sys.col_order.assign(static_cast<std::size_t>(2 * N), 0);
  sys.row_order[0] = evolution_row(N, 0);
  sys.col_order[0] = radius_unknown(N, 0);
  for (Index j = 1; j < N; ++j) {
    sys.row_order[static_cast<std::size_t>(2 * j - 1)] = evolution_row(N, j);
    sys.row_order[static_cast<std::size_t>(2 * j)] = continuity_row(N, j);
    sys.col_order[static_cast<std::size_t>(2 * j - 1)] = radius_unknown(N, j);
    sys.col_order[static_cast<std::size_t>(2 * j)] = slope_unknown(N, j);
  }
  sys.row_order[static_cast<std::size_t>(2 * N - 1)] = evolution_row(N, N);
  sys.col_order[static_cast<std::size_t>(2 * N - 1)] = radius_unknown(N, N);
  return sys;
}

namespace detail {

template <typename Scalar>
void require_above_pinch(const ClampedSpline<Scalar>& spline, Scalar pinch_tolerance) {
  const auto& r = spline.values();
  Index worst = 0;
  for (Index j = 0; j < r.size(); ++j) {
    if (!std::isfinite(static_cast<double>(r(j)))) {
      throw PinchError("non-finite radius after step", static_cast<double>(spline.nodes()(j)),
                       std::numeric_limits<double>::quiet_NaN());
    }
    if (r(j) < r(worst)) worst = j;
  }
  if (r(worst) <= pinch_tolerance) {
    throw PinchError("radius " + std::to_string(static_cast<double>(r(worst))) + " at z = " +
                         std::to_string(static_cast<double>(spline.nodes()(worst))) + " below pinch tolerance",
                     static_cast<double>(spline.nodes()(worst)), static_cast<double>(r(worst)));
  }
}

}  // namespace detail

/// Builds the spline encoded by a solution vector of the stepping system.
template <typename Scalar>
ClampedSpline<Scalar> spline_from_solution(const Vector<Scalar>& nodes, const Vector<Scalar>& x, Scalar alpha,
                                           Scalar beta) {
  const Index N = nodes.size() - 1;
  Vector<Scalar> values = x.head(N + 1);
  Vector<Scalar> slopes(N + 1);
  slopes(0) = alpha;
  slopes(N) = beta;
  for (Index j = 1; j < N; ++j) slopes(j) = x(slope_unknown(N, j));
  return ClampedSpline<Scalar>(nodes, std::move(values), std::move(slopes));
}

template <typename Scalar>
FlowState<Scalar> step(const AnisotropyModel<Scalar>& model, const FlowState<Scalar>& state, Scalar tau,
                       const QuadratureRule<Scalar>& rule, Scalar alpha, Scalar beta,
                       Scalar pinch_tolerance = Scalar(1e-3)) {
  const auto coeffs = compute_coefficients(model, state, tau, rule);
  const auto system = assemble(state, coeffs, alpha, beta);
  const Vector<Scalar> x = solve(system);
  FlowState<Scalar> next{state.time + tau, spline_from_solution(state.spline.nodes(), x, alpha, beta),
                         state.step_index + 1};
  detail::require_above_pinch(next.spline, pinch_tolerance);
  return next;
}

/// Forward Euler r^{k+1} = r^k + tau (Lambda - lambda_bar) sqrt(Q), all data at
/// step k, followed by a clamped refit. Stable only for tau below roughly
/// h^2 mu1 / 8; used as a test oracle.
template <typename Scalar>
FlowState<Scalar> reference_explicit_step(const AnisotropyModel<Scalar>& model, const FlowState<Scalar>& state,
                                          Scalar tau, const QuadratureRule<Scalar>& rule, Scalar alpha = Scalar(0),
                                          Scalar beta = Scalar(0), Scalar pinch_tolerance = Scalar(1e-3)) {
  using std::sqrt;
  const auto& spline = state.spline;
  const Scalar bar = lambda_bar(model, spline, rule);
  Vector<Scalar> values(spline.nodes().size());
  for (Index j = 0; j < values.size(); ++j) {
    const ProfilePoint<Scalar> p{spline.nodes()(j), spline.values()(j), spline.slopes()(j), spline.node_curvature(j)};
    values(j) = p.r + tau * (lambda_pointwise(model, p) - bar) * omega(p);
  }
  FlowState<Scalar> next{state.time + tau, fit_clamped(spline.nodes(), values, alpha, beta), state.step_index + 1};
  detail::require_above_pinch(next.spline, pinch_tolerance);
  return next;
}

}  // namespace wulff

#endif  // WULFF_STEPPER_HPP
