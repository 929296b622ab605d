#ifndef WULFF_ANISOTROPY_HPP
#define WULFF_ANISOTROPY_HPP

// Axially symmetric surface energy densities gamma(nu3) and the principal
// curvatures of the associated Wulff shape.
//
// Only the Rapini-Papoular family gamma = 1 + eps * nu3^2 is provided. All
// curvature quantities are computed from gamma and its derivatives, so a new
// kind only has to supply gamma and its first three derivatives.

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "wulff/errors.hpp"

namespace wulff {

enum class AnisotropyKind { Isotropic, RapiniPapoular };

namespace detail {

[[noreturn]] inline void throw_nu3_out_of_range(double nu3) {
  throw DomainError("nu3 must lie in [-1, 1], got " + std::to_string(nu3));
}

[[noreturn]] inline void throw_not_convex(double epsilon) {
  throw InvalidModelError("Wulff shape is not uniformly convex for epsilon = " + std::to_string(epsilon) +
                          " (need -1/2 < epsilon < 1)");
}

template <typename Scalar>
void require_nu3(Scalar nu3) {
  using std::abs;
  if (!(abs(nu3) <= Scalar(1))) throw_nu3_out_of_range(static_cast<double>(nu3));
}

// Unchecked gamma = 1 + eps nu3^2 and its derivatives.
template <typename Scalar>
Scalar gamma_raw(Scalar eps, Scalar nu3) {
  return Scalar(1) + eps * nu3 * nu3;
}
template <typename Scalar>
Scalar gamma_d1_raw(Scalar eps, Scalar nu3) {
  return Scalar(2) * eps * nu3;
}
template <typename Scalar>
Scalar gamma_d2_raw(Scalar eps, Scalar /*nu3*/) {
  return Scalar(2) * eps;
}
template <typename Scalar>
Scalar gamma_d3_raw(Scalar /*eps*/, Scalar /*nu3*/) {
  return Scalar(0);
}

// 1/mu2 = gamma - nu3 gamma'
template <typename Scalar>
Scalar inverse_mu2_raw(Scalar eps, Scalar nu3) {
  return gamma_raw(eps, nu3) - nu3 * gamma_d1_raw(eps, nu3);
}

// 1/mu1 = (1 - nu3^2) gamma'' + 1/mu2
template <typename Scalar>
Scalar inverse_mu1_raw(Scalar eps, Scalar nu3) {
  return (Scalar(1) - nu3 * nu3) * gamma_d2_raw(eps, nu3) + inverse_mu2_raw(eps, nu3);
}

// 1/mu1 and 1/mu2 are affine in nu3^2 for the supported kinds, so their
// minima over [-1, 1] are attained at nu3 = 0 or |nu3| = 1.
template <typename Scalar>
bool convex_raw(Scalar eps) {
  for (Scalar nu3 : {Scalar(0), Scalar(1)}) {
    if (!(inverse_mu1_raw(eps, nu3) > Scalar(0)) || !(inverse_mu2_raw(eps, nu3) > Scalar(0))) return false;
  }
  return true;
}

}  // namespace detail

template <typename Scalar>
class AnisotropyModel {
 public:
  static AnisotropyModel isotropic() { return AnisotropyModel(AnisotropyKind::Isotropic, Scalar(0)); }

  /// Any finite eps is representable so that convexity can be queried;
  /// curvature evaluation rejects non-convex models.
  static AnisotropyModel rapini_papoular(Scalar epsilon) {
    if (!std::isfinite(static_cast<double>(epsilon))) {
      throw DomainError("anisotropy strength must be finite");
    }
    return AnisotropyModel(AnisotropyKind::RapiniPapoular, epsilon);
  }

  AnisotropyKind kind() const { return kind_; }
  Scalar epsilon() const { return epsilon_; }
  bool convex() const { return convex_; }

 private:
  AnisotropyModel(AnisotropyKind kind, Scalar epsilon)
      : kind_(kind), epsilon_(epsilon), convex_(detail::convex_raw(epsilon)) {}

  AnisotropyKind kind_;
  Scalar epsilon_;
  bool convex_;
};

template <typename Scalar>
Scalar gamma(const AnisotropyModel<Scalar>& model, Scalar nu3) {
  detail::require_nu3(nu3);
  return detail::gamma_raw(model.epsilon(), nu3);
}

template <typename Scalar>
Scalar gamma_d1(const AnisotropyModel<Scalar>& model, Scalar nu3) {
  detail::require_nu3(nu3);
  return detail::gamma_d1_raw(model.epsilon(), nu3);
}

template <typename Scalar>
Scalar gamma_d2(const AnisotropyModel<Scalar>& model, Scalar nu3) {
  detail::require_nu3(nu3);
  return detail::gamma_d2_raw(model.epsilon(), nu3);
}

template <typename Scalar>
Scalar inverse_mu2(const AnisotropyModel<Scalar>& model, Scalar nu3) {
  detail::require_nu3(nu3);
  return detail::inverse_mu2_raw(model.epsilon(), nu3);
}

template <typename Scalar>
Scalar inverse_mu1(const AnisotropyModel<Scalar>& model, Scalar nu3) {
  detail::require_nu3(nu3);
  return detail::inverse_mu1_raw(model.epsilon(), nu3);
}

/// True iff both Wulff curvatures are strictly positive on all of [-1, 1].
template <typename Scalar>
bool check_convexity(const AnisotropyModel<Scalar>& model) {
  return detail::convex_raw(model.epsilon());
}

/// Builds a Rapini-Papoular model and rejects eps outside (-1/2, 1).
template <typename Scalar>
AnisotropyModel<Scalar> make_convex_model(Scalar epsilon) {
  auto model = AnisotropyModel<Scalar>::rapini_papoular(epsilon);
  if (!model.convex()) detail::throw_not_convex(static_cast<double>(epsilon));
  return model;
}

/// Wulff-shape curvature paired with the meridian curvature k1.
template <typename Scalar>
Scalar mu1(const AnisotropyModel<Scalar>& model, Scalar nu3) {
  if (!model.convex()) detail::throw_not_convex(static_cast<double>(model.epsilon()));
  return Scalar(1) / inverse_mu1(model, nu3);
}

/// Wulff-shape curvature paired with the parallel curvature k2 = -1/(r omega).
template <typename Scalar>
Scalar mu2(const AnisotropyModel<Scalar>& model, Scalar nu3) {
  if (!model.convex()) detail::throw_not_convex(static_cast<double>(model.epsilon()));
  return Scalar(1) / inverse_mu2(model, nu3);
}

/// d mu1 / d nu3 = -mu1^2 d(1/mu1)/d nu3, where
/// d(1/mu1)/d nu3 = -3 nu3 gamma'' + (1 - nu3^2) gamma'''.
template <typename Scalar>
Scalar mu1_d(const AnisotropyModel<Scalar>& model, Scalar nu3) {
  const Scalar m1 = mu1(model, nu3);
  const Scalar eps = model.epsilon();
  const Scalar d_inverse =
      Scalar(-3) * nu3 * detail::gamma_d2_raw(eps, nu3) + (Scalar(1) - nu3 * nu3) * detail::gamma_d3_raw(eps, nu3);
  return -m1 * m1 * d_inverse;
}

/// nu3 * d mu1/d nu3 >= 0 for every nu3: the generating curve of the Wulff
/// shape has non-decreasing curvature moving upward from the equator.
///
/// For Rapini-Papoular nu3 * mu1' = 6 eps nu3^2 mu1^2, so the sign is that of eps.
template <typename Scalar>
bool check_curvature_condition(const AnisotropyModel<Scalar>& model) {
  return model.convex() && model.epsilon() >= Scalar(0);
}

/// Position on the Wulff shape with outward normal nu: (1/mu2) nu + gamma'(nu3) E3.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> cahn_hoffman(const AnisotropyModel<Scalar>& model,
                                         const Eigen::Matrix<Scalar, 3, 1>& nu) {
  using std::abs;
  if (!(abs(nu.norm() - Scalar(1)) <= Scalar(64) * Eigen::NumTraits<Scalar>::epsilon())) {
    throw DomainError("Cahn-Hoffman map needs a unit normal");
  }
  const Scalar nu3 = nu.z();
  Eigen::Matrix<Scalar, 3, 1> xi = inverse_mu2(model, nu3) * nu;
  xi.z() += gamma_d1(model, nu3);
  return xi;
}

}  // namespace wulff

#endif  // WULFF_ANISOTROPY_HPP
