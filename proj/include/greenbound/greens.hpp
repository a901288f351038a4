#pragma once

#include <cmath>
#include <string>

#include "greenbound/errors.hpp"
#include "greenbound/grid.hpp"
#include "greenbound/potential.hpp"

namespace greenbound {

/// Decaying Green's function of (-d²/dx² + ε): G(x) = exp(-κ|x|) / (2κ), κ = √ε.
template <typename Scalar>
class BasicGreensKernel {
 public:
  explicit BasicGreensKernel(Scalar epsilon) : epsilon_(epsilon) {
    if (!(epsilon > Scalar(0)) || !std::isfinite(static_cast<double>(epsilon))) {
      throw ConfigError("epsilon must be positive and finite, got " + std::to_string(static_cast<double>(epsilon)));
    }
    kappa_ = std::sqrt(epsilon);
  }

  Scalar epsilon() const noexcept { return epsilon_; }
  Scalar kappa() const noexcept { return kappa_; }

 private:
  Scalar epsilon_;
  Scalar kappa_{};
};

using GreensKernel = BasicGreensKernel<double>;

template <typename Scalar>
Scalar green_value(const BasicGreensKernel<Scalar>& kernel, Scalar x) {
  return std::exp(-kernel.kappa() * std::abs(x)) / (Scalar(2) * kernel.kappa());
}

namespace detail {

// Closed Newton-Cotes sum over t[0..n] (n intervals, spacing h) where
// t(m) = table[m] * f[origin + dir*m]. Composite Simpson anchored at the far
// end (m = n), so a node's weight depends only on its global position and a
// jump in f does not leave a sawtooth in i; an odd interval count puts a 3/8
// panel next to the origin. Mirrored half-lines use identical summation
// order, so an even integrand produces a bitwise-even result.
template <typename Scalar>
Scalar half_line_sum(const VectorX<Scalar>& table, const VectorX<Scalar>& f, Eigen::Index origin, Eigen::Index dir,
                     Eigen::Index n, Scalar h) {
  auto t = [&](Eigen::Index m) { return table[m] * f[origin + dir * m]; };
  if (n == 0) return Scalar(0);
  if (n == 1) return h / Scalar(2) * (t(0) + t(1));

  const Eigen::Index simpson_start = (n % 2 == 0) ? 0 : 3;
  Scalar sum(0);
  if (simpson_start != 0) {
    sum = Scalar(3) * h / Scalar(8) * (t(0) + Scalar(3) * t(1) + Scalar(3) * t(2) + t(3));
  }
  if (simpson_start < n) {
    Scalar odd(0), even(0);
    for (Eigen::Index m = simpson_start + 1; m < n; m += 2) odd += t(m);
    for (Eigen::Index m = simpson_start + 2; m < n; m += 2) even += t(m);
    sum += h / Scalar(3) * (t(simpson_start) + Scalar(4) * odd + Scalar(2) * even + t(n));
  }
  return sum;
}

template <typename Scalar>
VectorX<Scalar> kernel_table(const BasicGreensKernel<Scalar>& kernel, const BasicGrid<Scalar>& grid) {
  // G(x_i - x_j) depends only on |i - j| on a uniform grid.
  VectorX<Scalar> table(grid.size());
  for (Eigen::Index m = 0; m < grid.size(); ++m) table[m] = green_value(kernel, Scalar(m) * grid.spacing());
  return table;
}

template <typename Scalar>
void check_finite(const VectorX<Scalar>& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(static_cast<double>(v[i]))) throw NonFinite(what, static_cast<std::size_t>(i));
  }
}

template <typename Scalar>
Scalar convolve_point(const VectorX<Scalar>& table, const VectorX<Scalar>& f, Eigen::Index i, Scalar h) {
  const Eigen::Index n = f.size();
  return half_line_sum(table, f, i, Eigen::Index(-1), i, h) + half_line_sum(table, f, i, Eigen::Index(1), n - 1 - i, h);
}

}  // namespace detail

/// ∫ G_ε(x_i - x') f(x') dx' at a single grid point.
template <typename Scalar, typename Derived>
Scalar convolve_at(const BasicGreensKernel<Scalar>& kernel, const BasicGrid<Scalar>& grid,
                   const Eigen::MatrixBase<Derived>& f, Eigen::Index index) {
  if (f.size() != grid.size()) {
    throw ShapeMismatch(static_cast<std::size_t>(grid.size()), static_cast<std::size_t>(f.size()));
  }
  const VectorX<Scalar> fv = f;
  detail::check_finite(fv, "convolution input");
  return detail::convolve_point(detail::kernel_table(kernel, grid), fv, index, grid.spacing());
}

/// w(x) = ∫ G_ε(x - x') f(x') dx' on every grid point, O(N²).
///
/// The integrand has a derivative jump at x' = x, so each output point is
/// integrated as two half-lines split there rather than with the global
/// Simpson weights.
template <typename Scalar, typename Derived>
VectorX<Scalar> convolve(const BasicGreensKernel<Scalar>& kernel, const BasicGrid<Scalar>& grid,
                         const Eigen::MatrixBase<Derived>& f) {
  if (f.size() != grid.size()) {
    throw ShapeMismatch(static_cast<std::size_t>(grid.size()), static_cast<std::size_t>(f.size()));
  }
  const VectorX<Scalar> fv = f;
  detail::check_finite(fv, "convolution input");
  const VectorX<Scalar> table = detail::kernel_table(kernel, grid);
  VectorX<Scalar> w(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) w[i] = detail::convolve_point(table, fv, i, grid.spacing());
  return w;
}

/// w(x) = ∫ G_ε(x - x') V(x') u(x') dx'.
template <typename Scalar, typename Derived>
VectorX<Scalar> apply_kernel(const BasicGreensKernel<Scalar>& kernel, const BasicGrid<Scalar>& grid,
                             const BasicPotential<Scalar>& potential, const Eigen::MatrixBase<Derived>& u) {
  if (u.size() != grid.size()) {
    throw ShapeMismatch(static_cast<std::size_t>(grid.size()), static_cast<std::size_t>(u.size()));
  }
  return convolve(kernel, grid, potential.sample(grid).cwiseProduct(u.template cast<Scalar>()));
}

}  // namespace greenbound
