#ifndef WULFF_SPLINE_HPP
#define WULFF_SPLINE_HPP

// Clamped cubic splines in Hermite form: nodal values r_n and nodal slopes
// d_n, with the end slopes d_1 = alpha and d_{N+1} = beta prescribed.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "wulff/errors.hpp"
#include "wulff/numerics.hpp"

namespace wulff {

template <typename Scalar>
struct SplineSample {
  Scalar value;
  Scalar slope;
  Scalar curvature;  // second derivative
};

template <typename Scalar>
class ClampedSpline {
 public:
  ClampedSpline(Vector<Scalar> nodes, Vector<Scalar> values, Vector<Scalar> slopes)
      : nodes_(std::move(nodes)), values_(std::move(values)), slopes_(std::move(slopes)) {
    if (nodes_.size() < 2) {
      throw DomainError("clamped spline needs at least one interval");
    }
    if (values_.size() != nodes_.size() || slopes_.size() != nodes_.size()) {
      throw DomainError("clamped spline: nodes, values and slopes must have equal length");
    }
    for (Index n = 0; n + 1 < nodes_.size(); ++n) {
      if (!(nodes_(n + 1) > nodes_(n))) {
        throw DomainError("clamped spline: nodes must be strictly increasing (index " + std::to_string(n) + ")");
      }
    }
  }

  const Vector<Scalar>& nodes() const { return nodes_; }
  const Vector<Scalar>& values() const { return values_; }
  const Vector<Scalar>& slopes() const { return slopes_; }

  /// Number of intervals N (there are N + 1 nodes).
  Index intervals() const { return nodes_.size() - 1; }
  Scalar alpha() const { return slopes_(0); }
  Scalar beta() const { return slopes_(intervals()); }
  Scalar width(Index n) const { return nodes_(n + 1) - nodes_(n); }

  /// Interval n with z_n <= z < z_{n+1}; the right end maps to the last interval.
  Index locate(Scalar z) const {
    if (!(z >= nodes_(0) && z <= nodes_(intervals()))) {
      throw DomainError("spline evaluation outside [" + std::to_string(static_cast<double>(nodes_(0))) + ", " +
                        std::to_string(static_cast<double>(nodes_(intervals()))) + "]: z = " +
                        std::to_string(static_cast<double>(z)));
    }
    const Scalar* first = nodes_.data();
    const Scalar* it = std::upper_bound(first, first + nodes_.size(), z);
    return std::clamp<Index>(static_cast<Index>(it - first) - 1, 0, intervals() - 1);
  }

  /// Value and derivatives on interval n at local coordinate s = z - z_n.
  SplineSample<Scalar> segment(Index n, Scalar s) const {
    const Scalar h = width(n);
    const Scalar t = s / h;
    const Scalar delta = (values_(n + 1) - values_(n)) / h;
    const Scalar d0 = slopes_(n);
    const Scalar d1 = slopes_(n + 1);
    const Scalar h00 = Scalar(1) - t * t * (Scalar(3) - Scalar(2) * t);
    const Scalar h01 = t * t * (Scalar(3) - Scalar(2) * t);
    const Scalar h10 = t * (Scalar(1) - t) * (Scalar(1) - t);
    const Scalar h11 = t * t * (t - Scalar(1));
    SplineSample<Scalar> out;
    out.value = values_(n) * h00 + values_(n + 1) * h01 + h * (d0 * h10 + d1 * h11);
    out.slope = Scalar(6) * delta * t * (Scalar(1) - t) + d0 * (Scalar(1) - t) * (Scalar(1) - Scalar(3) * t) +
                d1 * t * (Scalar(3) * t - Scalar(2));
    out.curvature = (delta * (Scalar(6) - Scalar(12) * t) + d0 * (Scalar(6) * t - Scalar(4)) +
                     d1 * (Scalar(6) * t - Scalar(2))) /
                    h;
    return out;
  }

  SplineSample<Scalar> sample(Scalar z) const {
    const Index n = locate(z);
    return segment(n, z - nodes_(n));
  }

  /// S'' at node n from the segment on its right, (6 delta_n - 4 d_n - 2 d_{n+1}) / h_n.
  Scalar curvature_from_right(Index n) const {
    const Scalar h = width(n);
    return (Scalar(6) * (values_(n + 1) - values_(n)) / h - Scalar(4) * slopes_(n) - Scalar(2) * slopes_(n + 1)) / h;
  }

  /// S'' at node n from the segment on its left, (-6 delta_{n-1} + 2 d_{n-1} + 4 d_n) / h_{n-1}.
  Scalar curvature_from_left(Index n) const {
    const Scalar h = width(n - 1);
    return (Scalar(-6) * (values_(n) - values_(n - 1)) / h + Scalar(2) * slopes_(n - 1) + Scalar(4) * slopes_(n)) / h;
  }

  /// Nodal second derivative: right-segment formula, except at the last node.
  Scalar node_curvature(Index n) const {
    return n < intervals() ? curvature_from_right(n) : curvature_from_left(n);
  }

 private:
  Vector<Scalar> nodes_;
  Vector<Scalar> values_;
  Vector<Scalar> slopes_;
};

template <typename Scalar>
Scalar eval(const ClampedSpline<Scalar>& s, Scalar z) {
  return s.sample(z).value;
}

template <typename Scalar>
Scalar eval_d(const ClampedSpline<Scalar>& s, Scalar z) {
  return s.sample(z).slope;
}

template <typename Scalar>
Scalar eval_dd(const ClampedSpline<Scalar>& s, Scalar z) {
  return s.sample(z).curvature;
}

template <typename Scalar>
Vector<Scalar> uniform_nodes(Index intervals) {
  if (intervals < 1) throw DomainError("need at least one interval");
  Vector<Scalar> z(intervals + 1);
  for (Index n = 0; n <= intervals; ++n) z(n) = Scalar(n) / Scalar(intervals);
  return z;
}

/// Interior slopes of the C^2 interpolant with clamped end slopes. Row n of
/// the continuity system reads
///   h_n d_{n-1} + 2 (h_{n-1} + h_n) d_n + h_{n-1} d_{n+1} = 3 (h_n delta_{n-1} + h_{n-1} delta_n)
/// and is strictly diagonally dominant, so it is solved without pivoting.
template <typename Scalar>
ClampedSpline<Scalar> fit_clamped(const Vector<Scalar>& nodes, const Vector<Scalar>& values, Scalar alpha,
                                  Scalar beta) {
  if (nodes.size() < 2 || values.size() != nodes.size()) {
    throw DomainError("fit_clamped: need matching nodes and values with at least one interval");
  }
  const Index intervals = nodes.size() - 1;
  for (Index n = 0; n < intervals; ++n) {
    if (!(nodes(n + 1) > nodes(n))) throw DomainError("fit_clamped: nodes must be strictly increasing");
  }

  Vector<Scalar> slopes(nodes.size());
  slopes(0) = alpha;
  slopes(intervals) = beta;
  const Index m = intervals - 1;
  if (m > 0) {
    auto h = [&](Index n) { return nodes(n + 1) - nodes(n); };
    auto delta = [&](Index n) { return (values(n + 1) - values(n)) / h(n); };
    Vector<Scalar> sub(m), diag(m), sup(m), rhs(m);
    for (Index i = 0; i < m; ++i) {
      const Index n = i + 1;
      sub(i) = h(n);
      diag(i) = Scalar(2) * (h(n - 1) + h(n));
      sup(i) = h(n - 1);
      rhs(i) = Scalar(3) * (h(n) * delta(n - 1) + h(n - 1) * delta(n));
    }
    rhs(0) -= sub(0) * alpha;
    rhs(m - 1) -= sup(m - 1) * beta;
    // Thomas sweep
    for (Index i = 1; i < m; ++i) {
      const Scalar w = sub(i) / diag(i - 1);
      diag(i) -= w * sup(i - 1);
      rhs(i) -= w * rhs(i - 1);
    }
    slopes(m) = rhs(m - 1) / diag(m - 1);
    for (Index i = m - 2; i >= 0; --i) {
      slopes(i + 1) = (rhs(i) - sup(i) * slopes(i + 2)) / diag(i);
    }
  }
  return ClampedSpline<Scalar>(nodes, values, std::move(slopes));
}

}  // namespace wulff

#endif  // WULFF_SPLINE_HPP
