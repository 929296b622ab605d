#ifndef WULFF_NUMERICS_HPP
#define WULFF_NUMERICS_HPP

// Composite Gauss-Legendre quadrature and a banded LU solver for the
// stepping system.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wulff/errors.hpp"

namespace wulff {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
std::span<const Scalar> as_span(const Vector<Scalar>& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Neumaier-compensated running sum.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar x) {
    using std::abs;
    const Scalar t = sum_ + x;
    if (abs(sum_) >= abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Scalar value() const { return sum_ + carry_; }

 private:
  Scalar sum_{0};
  Scalar carry_{0};
};

/// Gauss-Legendre rule on the reference interval [-1, 1].
template <typename Scalar>
struct QuadratureRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;

  int points() const { return static_cast<int>(nodes.size()); }
};

/// Nodes are the roots of P_n, found by Newton iteration from the Chebyshev
/// guesses in long double; weights are 2 / ((1 - x^2) P_n'(x)^2).
template <typename Scalar>
QuadratureRule<Scalar> gauss_legendre(int points) {
  if (points < 1 || points > 64) {
    throw DomainError("Gauss-Legendre rules need 1..64 points, got " + std::to_string(points));
  }
  using Long = long double;
  const int n = points;
  std::vector<Long> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Long root = std::cos(std::numbers::pi_v<Long> * (i + Long(0.75)) / (n + Long(0.5)));
    Long derivative = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Long p0 = 1, p1 = root;
      for (int k = 2; k <= n; ++k) {
        const Long p2 = ((2 * k - 1) * root * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      derivative = n * (root * p1 - p0) / (root * root - 1);
      const Long step = p1 / derivative;
      root -= step;
      if (std::abs(step) <= 4 * std::numeric_limits<Long>::epsilon()) break;
    }
    if (2 * i + 1 == n) root = 0;
    const Long weight = 2 / ((1 - root * root) * derivative * derivative);
    x[i] = -root;
    x[n - 1 - i] = root;
    w[i] = w[n - 1 - i] = weight;
  }
  QuadratureRule<Scalar> rule;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(static_cast<Scalar>(x[i]));
    rule.weights.push_back(static_cast<Scalar>(w[i]));
  }
  return rule;
}

/// Visits every composite quadrature point: f(interval, z, weight), with the
/// weight already scaled to the interval length.
template <typename Scalar, typename Visitor>
void for_each_quadrature_point(const QuadratureRule<Scalar>& rule, std::span<const Scalar> breakpoints,
                               Visitor&& visit) {
  for (std::size_t n = 0; n + 1 < breakpoints.size(); ++n) {
    const Scalar a = breakpoints[n];
    const Scalar b = breakpoints[n + 1];
    const Scalar half = (b - a) / Scalar(2);
    const Scalar mid = (a + b) / Scalar(2);
    for (int q = 0; q < rule.points(); ++q) {
      visit(static_cast<Index>(n), mid + half * rule.nodes[q], half * rule.weights[q]);
    }
  }
}

template <typename Scalar, typename F>
Scalar integrate(const QuadratureRule<Scalar>& rule, F&& f, std::span<const Scalar> breakpoints) {
  CompensatedSum<Scalar> sum;
  for_each_quadrature_point(rule, breakpoints, [&](Index, Scalar z, Scalar w) { sum.add(w * f(z)); });
  return sum.value();
}

/// Square system given by triplets. row_order / col_order describe the
/// permutation used to band the matrix before factorization: position p of
/// the banded system holds original row row_order[p] (resp. column). Empty
/// orders mean identity.
template <typename Scalar>
struct SparseSystem {
  Index dimension = 0;
  std::vector<Eigen::Triplet<Scalar>> entries;
  Vector<Scalar> rhs;
  std::vector<Index> row_order;
  std::vector<Index> col_order;

  explicit SparseSystem(Index n = 0) : dimension(n), rhs(Vector<Scalar>::Zero(n)) {}

  void add(Index row, Index col, Scalar value) { entries.emplace_back(row, col, value); }

  Vector<Scalar> multiply(const Vector<Scalar>& x) const {
    Vector<Scalar> y = Vector<Scalar>::Zero(dimension);
    for (const auto& e : entries) {
      y(e.row()) += e.value() * x(e.col());
    }
    return y;
  }
};

/// max |Mx - b| / max |b| (absolute when b = 0).
template <typename Scalar>
Scalar relative_residual(const SparseSystem<Scalar>& system, const Vector<Scalar>& x) {
  const Scalar scale = system.rhs.size() ? system.rhs.cwiseAbs().maxCoeff() : Scalar(0);
  const Vector<Scalar> r = system.multiply(x) - system.rhs;
  const Scalar err = r.size() ? r.cwiseAbs().maxCoeff() : Scalar(0);
  return scale > Scalar(0) ? err / scale : err;
}

/// LU factorization with partial pivoting of a matrix with kl sub- and ku
/// super-diagonals. Row k of the working array covers columns
/// [k - kl, k + kl + ku]; the extra kl columns absorb pivoting fill-in.
template <typename Scalar>
class BandedLU {
 public:
  BandedLU(Index n, Index kl, Index ku)
      : n_(n),
        kl_(kl),
        ku_(ku),
        band_(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, 2 * kl + ku + 1)),
        lower_(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, std::max<Index>(kl, 1))),
        pivots_(static_cast<std::size_t>(n)) {}

  Index size() const { return n_; }

  Scalar& at(Index i, Index j) { return band_(i, j - i + kl_); }
  Scalar at(Index i, Index j) const { return band_(i, j - i + kl_); }

  bool in_band(Index i, Index j) const { return j - i >= -kl_ && j - i <= ku_; }

  void factorize() {
    using std::abs;
    const Scalar scale = band_.cwiseAbs().maxCoeff();
    const Scalar floor = Scalar(1e-14) * (scale > Scalar(0) ? scale : Scalar(1));
    for (Index k = 0; k < n_; ++k) {
      const Index last_row = std::min(n_ - 1, k + kl_);
      const Index last_col = std::min(n_ - 1, k + kl_ + ku_);
      Index p = k;
      for (Index i = k + 1; i <= last_row; ++i) {
        if (abs(at(i, k)) > abs(at(p, k))) p = i;
      }
      if (!(abs(at(p, k)) > floor)) {
        throw SingularSystemError("banded LU: pivot " + std::to_string(static_cast<double>(abs(at(p, k)))) +
                                  " below singularity floor at column " + std::to_string(k));
      }
      pivots_[static_cast<std::size_t>(k)] = p;
      if (p != k) {
        for (Index j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
      }
      const Scalar pivot = at(k, k);
      for (Index i = k + 1; i <= last_row; ++i) {
        const Scalar m = at(i, k) / pivot;
        lower_(k, i - k - 1) = m;
        at(i, k) = Scalar(0);
        if (m == Scalar(0)) continue;
        for (Index j = k + 1; j <= last_col; ++j) at(i, j) -= m * at(k, j);
      }
    }
  }

  Vector<Scalar> solve(Vector<Scalar> b) const {
    for (Index k = 0; k < n_; ++k) {
      const Index p = pivots_[static_cast<std::size_t>(k)];
      if (p != k) std::swap(b(k), b(p));
      const Index last_row = std::min(n_ - 1, k + kl_);
      for (Index i = k + 1; i <= last_row; ++i) b(i) -= lower_(k, i - k - 1) * b(k);
    }
    for (Index k = n_ - 1; k >= 0; --k) {
      const Index last_col = std::min(n_ - 1, k + kl_ + ku_);
      Scalar acc = b(k);
      for (Index j = k + 1; j <= last_col; ++j) acc -= at(k, j) * b(j);
      b(k) = acc / at(k, k);
    }
    return b;
  }

 private:
  Index n_, kl_, ku_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> band_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lower_;
  std::vector<Index> pivots_;
};

/// Solves the system by banded LU after applying its row/column ordering.
template <typename Scalar>
Vector<Scalar> solve(const SparseSystem<Scalar>& system) {
  const Index n = system.dimension;
  if (system.rhs.size() != n) {
    throw DomainError("sparse system: rhs length does not match dimension");
  }
  auto inverse = [n](const std::vector<Index>& order) {
    std::vector<Index> inv(static_cast<std::size_t>(n));
    if (order.empty()) {
      for (Index i = 0; i < n; ++i) inv[static_cast<std::size_t>(i)] = i;
    } else {
      if (static_cast<Index>(order.size()) != n) throw DomainError("sparse system: ordering has wrong length");
      for (Index p = 0; p < n; ++p) inv[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = p;
    }
    return inv;
  };
  const std::vector<Index> row_pos = inverse(system.row_order);
  const std::vector<Index> col_pos = inverse(system.col_order);

  Index kl = 0, ku = 0;
  for (const auto& e : system.entries) {
    const Index d = col_pos[static_cast<std::size_t>(e.col())] - row_pos[static_cast<std::size_t>(e.row())];
    kl = std::max(kl, -d);
    ku = std::max(ku, d);
  }

  BandedLU<Scalar> lu(n, kl, ku);
  for (const auto& e : system.entries) {
    lu.at(row_pos[static_cast<std::size_t>(e.row())], col_pos[static_cast<std::size_t>(e.col())]) += e.value();
  }
  lu.factorize();

  Vector<Scalar> b(n);
  for (Index i = 0; i < n; ++i) b(row_pos[static_cast<std::size_t>(i)]) = system.rhs(i);
  const Vector<Scalar> y = lu.solve(std::move(b));
  Vector<Scalar> x(n);
  for (Index j = 0; j < n; ++j) x(j) = y(col_pos[static_cast<std::size_t>(j)]);

#ifndef NDEBUG
  if (relative_residual(system, x) > Scalar(1e-10)) {
    throw SingularSystemError("banded LU: residual check failed");
  }
#endif
  return x;
}

}  // namespace wulff

#endif  // WULFF_NUMERICS_HPP
