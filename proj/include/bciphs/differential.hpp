#pragma once

#include "bciphs/structure.hpp"

namespace bciphs {

/// First derivative on a uniform collocated grid: centered second-order
/// differences in the interior, second-order one-sided differences at both
/// endpoints, written as differences so that constants map to exact zeros.
/// Exact on constants everywhere and on linear fields everywhere.
/// Applied column-wise to stacked fields.
class DiffOperator {
 public:
  explicit DiffOperator(const Grid& grid) : nodes_(grid.size()), dz_(grid.dz()) {}

  Index size() const { return nodes_; }
  double dz() const { return dz_; }

  template <typename Derived>
  typename Derived::PlainObject operator()(const Eigen::MatrixBase<Derived>& f) const {
    using Scalar = typename Derived::Scalar;
    if (f.rows() != nodes_) {
      throw DimensionMismatch("d/dz: field length does not match the grid");
    }
    typename Derived::PlainObject out(f.rows(), f.cols());
    const Index last = nodes_ - 1;
    const Scalar inv2h = Scalar(1) / (Scalar(2) * Scalar(dz_));
    for (Index c = 0; c < f.cols(); ++c) {
      out(0, c) = (Scalar(4) * (f(1, c) - f(0, c)) - (f(2, c) - f(0, c))) * inv2h;
      for (Index k = 1; k < last; ++k) {
        out(k, c) = (f(k + 1, c) - f(k - 1, c)) * inv2h;
      }
      out(last, c) =
          (Scalar(4) * (f(last, c) - f(last - 1, c)) - (f(last, c) - f(last - 2, c))) * inv2h;
    }
    return out;
  }

  /// Dense N x N matrix of the same stencil.
  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nodes_, nodes_);
    const double inv2h = 1.0 / (2.0 * dz_);
    const Index last = nodes_ - 1;
    d(0, 0) = -3.0 * inv2h;
    d(0, 1) = 4.0 * inv2h;
    d(0, 2) = -inv2h;
    for (Index k = 1; k < last; ++k) {
      d(k, k - 1) = -inv2h;
      d(k, k + 1) = inv2h;
    }
    d(last, last) = 3.0 * inv2h;
    d(last, last - 1) = -4.0 * inv2h;
    d(last, last - 2) = inv2h;
    return d;
  }

 private:
  Index nodes_;
  double dz_;
};

/// Trapezoid weights on the grid.
inline Field trapezoid_weights(const Grid& grid) {
  Field w = Field::Constant(grid.size(), grid.dz());
  w[0] *= 0.5;
  w[grid.size() - 1] *= 0.5;
  return w;
}

/// Trapezoid integral of a sampled field.
template <typename Derived>
typename Derived::Scalar integrate(const Grid& grid, const Eigen::MatrixBase<Derived>& f) {
  static_assert(Derived::ColsAtCompileTime == 1, "integrate expects a single field");
  const Index last = f.size() - 1;
  return grid.dz() * (f.sum() - typename Derived::Scalar(0.5) * (f(0) + f(last)));
}

}  // namespace bciphs
