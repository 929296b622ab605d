#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "wulff/anisotropy.hpp"
#include "wulff/experiments.hpp"
#include "wulff/geometry.hpp"
#include "wulff/numerics.hpp"
#include "wulff/spline.hpp"
#include "wulff/stepper.hpp"

namespace wulff {

namespace {

struct Check {
  std::string name;
  std::function<bool(std::string&)> body;
};

bool quadrature_exactness(std::string& note) {
  double worst = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const auto rule = gauss_legendre<double>(n);
    const double bounds[] = {0.0, 1.0};
    for (int p = 0; p <= 2 * n - 1; ++p) {
      const double got = integrate(rule, [p](double z) { return std::pow(z, p); }, std::span<const double>(bounds));
      worst = std::max(worst, std::abs(got - 1.0 / (p + 1)));
    }
  }
  note = fmt::format("max error {:.2e}", worst);
  return worst <= 1e-14;
}

bool spline_cubic_reproduction(std::string& note) {
  auto p = [](double z) { return 0.3 - z + 2.0 * z * z - 0.7 * z * z * z; };
  auto dp = [](double z) { return -1.0 + 4.0 * z - 2.1 * z * z; };
  auto ddp = [](double z) { return 4.0 - 4.2 * z; };
  const Vector<double> nodes = uniform_nodes<double>(12);
  Vector<double> values = nodes.unaryExpr(p);
  const auto s = fit_clamped(nodes, values, dp(0.0), dp(1.0));
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double z = i / 1000.0;
    const auto sample = s.sample(z);
    worst = std::max({worst, std::abs(sample.value - p(z)), std::abs(sample.slope - dp(z)),
                      std::abs(sample.curvature - ddp(z))});
  }
  note = fmt::format("max error {:.2e}", worst);
  return worst <= 1e-10;
}

bool spline_c2_continuity(std::string& note) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  const Vector<double> nodes = uniform_nodes<double>(20);
  Vector<double> values(nodes.size());
  for (auto& v : values) v = u(gen);
  const auto s = fit_clamped(nodes, values, 0.0, 0.0);
  double worst = 0.0;
  for (Index n = 1; n < s.intervals(); ++n) {
    const double l = s.curvature_from_left(n);
    const double r = s.curvature_from_right(n);
    worst = std::max(worst, std::abs(l - r) / (1.0 + std::abs(r)));
  }
  note = fmt::format("max jump {:.2e}", worst);
  return worst <= 1e-10;
}

bool banded_matches_dense(std::string& note) {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Index n = 40;
  SparseSystem<double> sys(n);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = std::max<Index>(0, i - 2); j <= std::min<Index>(n - 1, i + 3); ++j) {
      const double v = u(gen) + (i == j ? 0.2 : 0.0);
      sys.add(i, j, v);
      dense(i, j) = v;
    }
    sys.rhs(i) = u(gen);
  }
  const Vector<double> x = solve(sys);
  const Vector<double> y = dense.partialPivLu().solve(sys.rhs);
  const double diff = (x - y).cwiseAbs().maxCoeff() / y.cwiseAbs().maxCoeff();
  note = fmt::format("relative difference {:.2e}", diff);
  return diff <= 1e-10;
}

bool anisotropy_derivatives(std::string& note) {
  const auto model = make_convex_model(0.3);
  double worst = 0.0;
  const double h = 1e-5;
  for (int i = -90; i <= 90; ++i) {
    const double nu3 = i / 100.0;
    const double d1 = (gamma(model, nu3 + h) - gamma(model, nu3 - h)) / (2 * h);
    const double d2 = (gamma_d1(model, nu3 + h) - gamma_d1(model, nu3 - h)) / (2 * h);
    worst = std::max({worst, std::abs(d1 - gamma_d1(model, nu3)) / (1.0 + std::abs(d1)),
                      std::abs(d2 - gamma_d2(model, nu3)) / (1.0 + std::abs(d2))});
  }
  note = fmt::format("max relative error {:.2e}", worst);
  return worst <= 1e-8;
}

bool cylinder_fixed_point(std::string& note) {
  const auto rule = gauss_legendre<double>(4);
  double worst = 0.0;
  for (double eps : {-0.2, 0.0, 0.2, 0.4}) {
    const auto model = make_convex_model(eps);
    for (double radius : {0.3, 0.5, 1.0}) {
      const Vector<double> nodes = uniform_nodes<double>(50);
      FlowState<double> state{0.0, fit_clamped(nodes, Vector<double>::Constant(nodes.size(), radius).eval(), 0.0, 0.0), 0};
      const auto next = step(model, state, 1e-3, rule, 0.0, 0.0);
      worst = std::max(worst, (next.spline.values().array() - radius).abs().maxCoeff());
    }
  }
  note = fmt::format("max nodal change {:.2e}", worst);
  return worst <= 1e-11;
}

bool threshold_value(std::string& note) {
  const double r = stability_threshold(make_convex_model(0.2), 1.0);
  note = fmt::format("{:.6f}", r);
  return std::abs(r - 0.3766) <= 1e-4;
}

bool hermite_volumes(std::string& note) {
  const auto model = make_convex_model(0.2);
  const auto rule = gauss_legendre<double>(4);
  FlowConfig a = preset("exp1");
  FlowConfig b = preset("exp2");
  const double va = integrals(model, initial_state(a).spline, rule).volume;
  const double vb = integrals(model, initial_state(b).spline, rule).volume;
  note = fmt::format("{:.5f} / {:.5f}", va, vb);
  return std::abs(va - 0.9847) <= 5e-5 && std::abs(vb - 0.2980) <= 5e-5;
}

}  // namespace

bool run_invariant_checks(std::ostream& out) {
  const Check checks[] = {
      {"gauss-legendre exactness", quadrature_exactness},
      {"spline cubic reproduction", spline_cubic_reproduction},
      {"spline C2 continuity", spline_c2_continuity},
      {"banded LU vs dense LU", banded_matches_dense},
      {"gamma finite differences", anisotropy_derivatives},
      {"cylinder fixed point", cylinder_fixed_point},
      {"stability threshold eps=0.2", threshold_value},
      {"Hermite initial volumes", hermite_volumes},
  };
  bool all = true;
  for (const auto& check : checks) {
    std::string note;
    bool ok = false;
    try {
      ok = check.body(note);
    } catch (const std::exception& e) {
      note = e.what();
    }
    all = all && ok;
    out << fmt::format("[{}] {} ({})\n", ok ? "PASS" : "FAIL", check.name, note);
  }
  return all;
}

}  // namespace wulff
