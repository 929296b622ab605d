#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "wulff/spline.hpp"

namespace {

using wulff::ClampedSpline;
using wulff::Index;
using VectorXd = wulff::Vector<double>;

VectorXd sample(const VectorXd& z, auto&& f) { return z.unaryExpr(f); }

TEST(Spline, FlatProfile) {
  const VectorXd z = wulff::uniform_nodes<double>(7);
  const auto s = wulff::fit_clamped(z, VectorXd::Constant(8, 0.5).eval(), 0.0, 0.0);
  EXPECT_TRUE((s.slopes().array() == 0.0).all());
  for (double x : {0.0, 0.13, 0.5, 0.77, 1.0}) {
    EXPECT_DOUBLE_EQ(wulff::eval(s, x), 0.5);
    EXPECT_DOUBLE_EQ(wulff::eval_d(s, x), 0.0);
    EXPECT_NEAR(wulff::eval_dd(s, x), 0.0, 1e-12);
  }
}

TEST(Spline, CubeSlopesAndCurvature) {
  const VectorXd z = wulff::uniform_nodes<double>(10);
  const auto s = wulff::fit_clamped(z, sample(z, [](double x) { return x * x * x; }), 0.0, 3.0);
  for (Index n = 0; n < z.size(); ++n) {
    EXPECT_NEAR(s.slopes()(n), 3.0 * z(n) * z(n), 1e-12);
  }
  EXPECT_NEAR(wulff::eval_dd(s, 0.5), 3.0, 1e-12);
}

TEST(Spline, SingleSegmentHermite) {
  VectorXd z(2), r(2);
  z << 0.0, 1.0;
  r << 0.7, 0.4;
  const auto s = wulff::fit_clamped(z, r, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(wulff::eval(s, 0.0), 0.7);
  EXPECT_DOUBLE_EQ(wulff::eval(s, 1.0), 0.4);
  EXPECT_DOUBLE_EQ(wulff::eval_d(s, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(wulff::eval_d(s, 1.0), 0.0);
  EXPECT_NEAR(wulff::eval(s, 0.5), 0.55, 1e-15);
}

TEST(Spline, DomainErrors) {
  VectorXd z(3), r(3);
  z << 0.0, 0.5, 0.5;
  r << 1, 1, 1;
  EXPECT_THROW(wulff::fit_clamped(z, r, 0.0, 0.0), wulff::DomainError);
  z << 0.0, 0.6, 0.4;
  EXPECT_THROW(wulff::fit_clamped(z, r, 0.0, 0.0), wulff::DomainError);
  EXPECT_THROW(wulff::fit_clamped(z, VectorXd::Ones(2).eval(), 0.0, 0.0), wulff::DomainError);
  const auto s = wulff::fit_clamped(wulff::uniform_nodes<double>(4), VectorXd::Ones(5).eval(), 0.0, 0.0);
  EXPECT_THROW(wulff::eval(s, -1e-9), wulff::DomainError);
  EXPECT_THROW(wulff::eval_d(s, 1.0 + 1e-9), wulff::DomainError);
  EXPECT_THROW(ClampedSpline<double>(VectorXd::Zero(1), VectorXd::Zero(1), VectorXd::Zero(1)), wulff::DomainError);
}

// Independent oracle: assemble "left S'' = right S''" at every interior node
// from the segment second-derivative formulas into a dense matrix.
VectorXd dense_interior_slopes(const VectorXd& z, const VectorXd& r, double alpha, double beta) {
  const Index N = z.size() - 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N + 1, N + 1);
  VectorXd b = VectorXd::Zero(N + 1);
  A(0, 0) = 1.0;
  b(0) = alpha;
  A(N, N) = 1.0;
  b(N) = beta;
  for (Index n = 1; n < N; ++n) {
    const double hl = z(n) - z(n - 1), hr = z(n + 1) - z(n);
    // left:  (-6 (r_n - r_{n-1})/hl + 2 d_{n-1} + 4 d_n) / hl
    // right: ( 6 (r_{n+1} - r_n)/hr - 4 d_n - 2 d_{n+1}) / hr
    A(n, n - 1) = 2.0 / hl;
    A(n, n) = 4.0 / hl + 4.0 / hr;
    A(n, n + 1) = 2.0 / hr;
    b(n) = 6.0 * (r(n) - r(n - 1)) / (hl * hl) + 6.0 * (r(n + 1) - r(n)) / (hr * hr);
  }
  return A.fullPivLu().solve(b);
}

TEST(SplineProperty, MatchesDenseContinuitySolve) {
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    VectorXd z = wulff::uniform_nodes<double>(8);
    if (trial % 2) {
      // Graded nodes exercise the non-uniform continuity coefficients.
      for (Index n = 1; n < 8; ++n) z(n) = std::pow(z(n), 1.3) + 0.01 * u(gen);
    }
    VectorXd r(9);
    for (auto& v : r) v = u(gen);
    const double alpha = u(gen), beta = u(gen);
    const auto s = wulff::fit_clamped(z, r, alpha, beta);
    const VectorXd oracle = dense_interior_slopes(z, r, alpha, beta);
    EXPECT_LE((s.slopes() - oracle).cwiseAbs().maxCoeff(), 1e-12) << "trial " << trial;
  }
}

TEST(SplineProperty, InterpolationClampingAndC2) {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index N = 4 + trial * 7;
    const VectorXd z = wulff::uniform_nodes<double>(N);
    VectorXd r(N + 1);
    for (auto& v : r) v = u(gen);
    const double alpha = u(gen) - 1.0, beta = u(gen) - 1.0;
    const auto s = wulff::fit_clamped(z, r, alpha, beta);
    for (Index n = 0; n <= N; ++n) {
      EXPECT_NEAR(wulff::eval(s, z(n)), r(n), 1e-15 * (1.0 + std::abs(r(n))));
    }
    EXPECT_EQ(wulff::eval_d(s, 0.0), alpha);
    EXPECT_EQ(wulff::eval_d(s, 1.0), beta);
    for (Index n = 1; n < N; ++n) {
      const double right = s.curvature_from_right(n);
      EXPECT_LE(std::abs(s.curvature_from_left(n) - right), 1e-10 * (1.0 + std::abs(right)));
    }
  }
}

TEST(SplineProperty, CubicReproduction) {
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double a = u(gen), b = u(gen), c = u(gen), d = u(gen);
    auto p = [=](double x) { return a + x * (b + x * (c + x * d)); };
    auto dp = [=](double x) { return b + x * (2 * c + 3 * d * x); };
    auto ddp = [=](double x) { return 2 * c + 6 * d * x; };
    const VectorXd z = wulff::uniform_nodes<double>(3 + trial);
    const auto s = wulff::fit_clamped(z, sample(z, p), dp(0.0), dp(1.0));
    for (int i = 0; i <= 2000; ++i) {
      const double x = i / 2000.0;
      const auto smp = s.sample(x);
      EXPECT_LE(std::abs(smp.value - p(x)), 1e-10);
      EXPECT_LE(std::abs(smp.slope - dp(x)), 1e-10);
      EXPECT_LE(std::abs(smp.curvature - ddp(x)), 1e-10);
    }
  }
}

double cosine_error(Index N) {
  auto f = [](double x) { return 1.0 + std::cos(8.0 * std::numbers::pi * x) / 4.0; };
  const VectorXd z = wulff::uniform_nodes<double>(N);
  const auto s = wulff::fit_clamped(z, sample(z, f), 0.0, 0.0);
  double worst = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double x = i / 20000.0;
    worst = std::max(worst, std::abs(wulff::eval(s, x) - f(x)));
  }
  return worst;
}

TEST(SplineProperty, FourthOrderConvergence) {
  for (Index N : {64, 128}) {
    const double ratio = cosine_error(N) / cosine_error(2 * N);
    EXPECT_NEAR(ratio, 16.0, 2.0) << "N = " << N;
  }
}

TEST(Spline, LongDoubleCubicReproduction) {
  using VectorXl = wulff::Vector<long double>;
  const VectorXl z = wulff::uniform_nodes<long double>(9);
  const VectorXl r = z.unaryExpr([](long double x) { return x * x * x - x; });
  const auto s = wulff::fit_clamped<long double>(z, r, -1.0L, 2.0L);
  EXPECT_NEAR(static_cast<double>(wulff::eval_dd(s, 0.3L)), 1.8, 1e-15);
}

}  // namespace
