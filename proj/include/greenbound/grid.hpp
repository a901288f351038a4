#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "greenbound/errors.hpp"

namespace greenbound {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Uniform, symmetric sampling of [-L, L] with composite Simpson weights.
///
/// Abscissae are mirrored exactly (x_i == -x_{N-1-i} bitwise) and the centre
/// point is exactly zero, so odd integrands cancel pairwise in `integrate`.
template <typename Scalar>
class BasicGrid {
 public:
  using Vector = VectorX<Scalar>;

  BasicGrid(Scalar half_width, Eigen::Index point_count) : half_width_(half_width), count_(point_count) {
    if (!(half_width > Scalar(0)) || !std::isfinite(static_cast<double>(half_width))) {
      throw ConfigError("grid half-width L must be positive and finite, got " +
                        std::to_string(static_cast<double>(half_width)));
    }
    if (point_count < 3 || point_count % 2 == 0) {
      throw ConfigError("grid point count N must be odd and >= 3, got " + std::to_string(point_count));
    }
    spacing_ = Scalar(2) * half_width / Scalar(point_count - 1);

    const Eigen::Index mid = point_count / 2;
    points_.resize(point_count);
    for (Eigen::Index i = 0; i < mid; ++i) {
      // -L + i*h, computed from the exact fraction to avoid accumulated drift.
      const Scalar x = -half_width + Scalar(2) * half_width * Scalar(i) / Scalar(point_count - 1);
      points_[i] = x;
      points_[point_count - 1 - i] = -x;
    }
    points_[mid] = Scalar(0);

    weights_.resize(point_count);
    const Scalar third = spacing_ / Scalar(3);
    for (Eigen::Index i = 0; i < point_count; ++i) {
      if (i == 0 || i == point_count - 1) {
        weights_[i] = third;
      } else {
        weights_[i] = (i % 2 == 1 ? Scalar(4) : Scalar(2)) * third;
      }
    }
  }

  Scalar half_width() const noexcept { return half_width_; }
  Eigen::Index size() const noexcept { return count_; }
  Scalar spacing() const noexcept { return spacing_; }
  Eigen::Index center_index() const noexcept { return count_ / 2; }

  const Vector& points() const noexcept { return points_; }
  const Vector& weights() const noexcept { return weights_; }
  Scalar point(Eigen::Index i) const { return points_[i]; }

  /// Index of the grid point equal to `x`, or -1 if `x` is not a grid point.
  Eigen::Index index_of(Scalar x) const {
    const Scalar pos = (x + half_width_) / spacing_;
    const auto i = static_cast<Eigen::Index>(std::llround(static_cast<double>(pos)));
    if (i < 0 || i >= count_) return -1;
    if (std::abs(points_[i] - x) > Scalar(1e-9) * spacing_) return -1;
    return i;
  }

  /// Evaluate `f` at every abscissa.
  template <typename F>
  Vector sample(F&& f) const {
    Vector out(count_);
    for (Eigen::Index i = 0; i < count_; ++i) out[i] = f(points_[i]);
    return out;
  }

 private:
  Scalar half_width_;
  Eigen::Index count_;
  Scalar spacing_{};
  Vector points_;
  Vector weights_;
};

using Grid = BasicGrid<double>;

template <typename Scalar>
BasicGrid<Scalar> make_grid(Scalar half_width, Eigen::Index point_count) {
  return BasicGrid<Scalar>(half_width, point_count);
}

inline Grid make_grid(double half_width, Eigen::Index point_count) { return Grid(half_width, point_count); }

/// Composite Simpson integral of grid samples, Σ w_i s_i.
///
/// Summed in mirrored pairs so that odd samples on the symmetric grid give 0.
template <typename Scalar, typename Derived>
Scalar integrate(const BasicGrid<Scalar>& grid, const Eigen::MatrixBase<Derived>& samples) {
  const Eigen::Index n = grid.size();
  if (samples.size() != n) {
    throw ShapeMismatch(static_cast<std::size_t>(n), static_cast<std::size_t>(samples.size()));
  }
  const auto& w = grid.weights();
  const Eigen::Index mid = grid.center_index();
  Scalar sum = w[mid] * Scalar(samples(mid));
  for (Eigen::Index i = 0; i < mid; ++i) {
    sum += w[i] * Scalar(samples(i)) + w[n - 1 - i] * Scalar(samples(n - 1 - i));
  }
  return sum;
}

}  // namespace greenbound
