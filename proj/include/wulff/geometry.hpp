#ifndef WULFF_GEOMETRY_HPP
#define WULFF_GEOMETRY_HPP

// Pointwise and integral geometry of a surface of revolution whose
// generating curve is the graph r = r(z), 0 <= z <= h, rotated about the
// vertical axis.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "wulff/anisotropy.hpp"
#include "wulff/errors.hpp"
#include "wulff/numerics.hpp"
#include "wulff/spline.hpp"

namespace wulff {

template <typename Scalar>
struct ProfilePoint {
  Scalar z;
  Scalar r;
  Scalar r_z;
  Scalar r_zz;
};

template <typename Scalar>
struct IntegralReport {
  Scalar energy;       // 2 pi int r gamma(nu3) omega dz
  Scalar volume;       // pi int r^2 dz
  Scalar lambda_bar;   // area-weighted mean of the anisotropic mean curvature
  Scalar l2_residual;  // 2 pi int (Lambda - lambda_bar)^2 r omega dz
  Scalar min_radius;
  Scalar max_omega;
};

namespace detail {

[[noreturn]] inline void throw_pinch_at(double z, double r) {
  throw PinchError("profile touches the axis near z = " + std::to_string(z), z, r);
}

template <typename Scalar>
ProfilePoint<Scalar> checked_point(const ClampedSpline<Scalar>& spline, Index n, Scalar z) {
  const SplineSample<Scalar> s = spline.segment(n, z - spline.nodes()(n));
  if (!(s.value > Scalar(0))) throw_pinch_at(static_cast<double>(z), static_cast<double>(s.value));
  return {z, s.value, s.slope, s.curvature};
}

}  // namespace detail

/// omega = sqrt(1 + r_z^2) = 1 / sqrt(1 - nu3^2)
template <typename Scalar>
Scalar omega(const ProfilePoint<Scalar>& p) {
  using std::sqrt;
  return sqrt(Scalar(1) + p.r_z * p.r_z);
}

/// Vertical component of the outward unit normal, -r_z / omega.
template <typename Scalar>
Scalar normal_z(const ProfilePoint<Scalar>& p) {
  return -p.r_z / omega(p);
}

/// Lambda = k1/mu1 + k2/mu2 with k1 = r_zz / omega^3 and k2 = -1 / (r omega).
template <typename Scalar>
Scalar lambda_pointwise(const AnisotropyModel<Scalar>& model, const ProfilePoint<Scalar>& p) {
  if (!(p.r > Scalar(0))) detail::throw_pinch_at(static_cast<double>(p.z), static_cast<double>(p.r));
  const Scalar w = omega(p);
  const Scalar nu3 = -p.r_z / w;
  return p.r_zz / (mu1(model, nu3) * w * w * w) - Scalar(1) / (mu2(model, nu3) * p.r * w);
}


/// Lambda-bar alone: int Lambda r omega dz / int r omega dz.
template <typename Scalar>
Scalar lambda_bar(const AnisotropyModel<Scalar>& model, const ClampedSpline<Scalar>& spline,
                  const QuadratureRule<Scalar>& rule) {
  CompensatedSum<Scalar> weighted, area;
  for_each_quadrature_point(rule, as_span(spline.nodes()), [&](Index n, Scalar z, Scalar w) {
    const auto p = detail::checked_point(spline, n, z);
    const Scalar da = w * p.r * omega(p);
    weighted.add(da * lambda_pointwise(model, p));
    area.add(da);
  });
  return weighted.value() / area.value();
}

template <typename Scalar>
IntegralReport<Scalar> integrals(const AnisotropyModel<Scalar>& model, const ClampedSpline<Scalar>& spline,
                                 const QuadratureRule<Scalar>& rule) {
  using std::max;
  using std::min;
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar bar = lambda_bar(model, spline, rule);

  CompensatedSum<Scalar> energy, volume, residual;
  Scalar min_radius = std::numeric_limits<Scalar>::infinity();
  Scalar max_omega = Scalar(1);
  for_each_quadrature_point(rule, as_span(spline.nodes()), [&](Index n, Scalar z, Scalar w) {
    const auto p = detail::checked_point(spline, n, z);
    const Scalar om = omega(p);
    const Scalar deviation = lambda_pointwise(model, p) - bar;
    energy.add(w * p.r * gamma(model, -p.r_z / om) * om);
    volume.add(w * p.r * p.r);
    residual.add(w * deviation * deviation * p.r * om);
    min_radius = min(min_radius, p.r);
    max_omega = max(max_omega, om);
  });
  min_radius = min(min_radius, spline.values().minCoeff());

  IntegralReport<Scalar> report;
  report.energy = two_pi * energy.value();
  report.volume = std::numbers::pi_v<Scalar> * volume.value();
  report.lambda_bar = bar;
  report.l2_residual = two_pi * residual.value();
  report.min_radius = min_radius;
  report.max_omega = max_omega;
  return report;
}

/// Lower radius bound c0 guaranteed along the flow when
/// gamma(e3) V / d - F > 0, with pi c0^2 equal to that excess. std::nullopt
/// when the initial energy is too large for the bound to apply.
template <typename Scalar>
std::optional<Scalar> pinching_bound(const AnisotropyModel<Scalar>& model, Scalar energy0, Scalar volume0,
                                     Scalar d) {
  using std::sqrt;
  const Scalar excess = gamma(model, Scalar(1)) * volume0 / d - energy0;
  if (excess < Scalar(0)) {
    return std::nullopt;
  }
  return sqrt(excess / std::numbers::pi_v<Scalar>);
}

/// Critical cylinder radius (h/pi) sqrt(mu2(0)/mu1(0)); equals (h/pi) sqrt(1 + 2 eps)
/// for Rapini-Papoular.
template <typename Scalar>
Scalar stability_threshold(const AnisotropyModel<Scalar>& model, Scalar h) {
  using std::sqrt;
  return h / std::numbers::pi_v<Scalar> * sqrt(mu2(model, Scalar(0)) / mu1(model, Scalar(0)));
}

/// Radius at which the slowest volume-preserving mode cos(pi z / h) of the
/// linearized flow about a cylinder changes sign: the decay rate is
/// pi^2 / (h^2 mu1(0)) - 1 / (mu2(0) R^2), giving (h/pi) sqrt(mu1(0)/mu2(0)).
template <typename Scalar>
Scalar linearized_stability_radius(const AnisotropyModel<Scalar>& model, Scalar h) {
  using std::sqrt;
  return h / std::numbers::pi_v<Scalar> * sqrt(mu1(model, Scalar(0)) / mu2(model, Scalar(0)));
}

}  // namespace wulff

#endif  // WULFF_GEOMETRY_HPP
