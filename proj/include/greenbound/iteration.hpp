#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "greenbound/errors.hpp"
#include "greenbound/greens.hpp"
#include "greenbound/grid.hpp"
#include "greenbound/potential.hpp"

namespace greenbound {

enum class InitialGuess { gaussian_bump, constant_one, custom };

template <typename Scalar>
struct BasicIterationConfig {
  Scalar x_ref = Scalar(0);
  int max_iterations = 500;
  Scalar u_tolerance = Scalar(1e-10);
  Scalar lambda_tolerance = Scalar(1e-12);
  InitialGuess initial_guess = InitialGuess::gaussian_bump;
  VectorX<Scalar> custom_samples{};
};

using IterationConfig = BasicIterationConfig<double>;

/// Sampled u(x), pinned to 1 at the reference grid index.
template <typename Scalar>
struct BasicWavefunction {
  VectorX<Scalar> samples;
  Eigen::Index ref_index = 0;

  Scalar at_ref() const { return samples[ref_index]; }
};

using Wavefunction = BasicWavefunction<double>;

template <typename Scalar>
struct BasicIterateOutcome {
  BasicWavefunction<Scalar> u;
  Scalar lambda{};
  Scalar epsilon{};
  int iterations_used = 0;
  std::vector<Scalar> residual_history;
  std::vector<Scalar> lambda_history;
  bool converged = false;

  Scalar final_residual() const {
    return residual_history.empty() ? std::numeric_limits<Scalar>::infinity() : residual_history.back();
  }
};

using IterateOutcome = BasicIterateOutcome<double>;

/// Resolves x_ref to a grid index, throwing ConfigError if it is not a grid point.
template <typename Scalar>
Eigen::Index reference_index(const BasicGrid<Scalar>& grid, Scalar x_ref) {
  const Eigen::Index i = grid.index_of(x_ref);
  if (i < 0) {
    throw ConfigError("x_ref=" + std::to_string(static_cast<double>(x_ref)) + " is not a grid point");
  }
  return i;
}

template <typename Scalar>
void validate_config(const BasicIterationConfig<Scalar>& cfg, const BasicGrid<Scalar>& grid) {
  reference_index(grid, cfg.x_ref);
  if (!(cfg.u_tolerance > Scalar(0))) throw ConfigError("u_tolerance must be positive");
  if (!(cfg.lambda_tolerance > Scalar(0))) throw ConfigError("lambda_tolerance must be positive");
  if (cfg.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (cfg.initial_guess == InitialGuess::custom && cfg.custom_samples.size() != grid.size()) {
    throw ConfigError("custom initial guess has " + std::to_string(cfg.custom_samples.size()) +
                      " samples, grid has " + std::to_string(grid.size()));
  }
}

template <typename Scalar>
VectorX<Scalar> initial_samples(const BasicIterationConfig<Scalar>& cfg, const BasicGrid<Scalar>& grid) {
  switch (cfg.initial_guess) {
    case InitialGuess::gaussian_bump:
      return grid.sample([](Scalar x) { return std::exp(-x * x / Scalar(4)); });
    case InitialGuess::constant_one:
      return VectorX<Scalar>::Ones(grid.size());
    case InitialGuess::custom:
      break;
  }
  return cfg.custom_samples;
}

namespace detail {

template <typename Scalar>
struct Step {
  BasicWavefunction<Scalar> next;
  Scalar denominator;
};

template <typename Scalar>
Step<Scalar> step(const BasicGreensKernel<Scalar>& kernel, const BasicGrid<Scalar>& grid,
                  const VectorX<Scalar>& potential_samples, const VectorX<Scalar>& u, Eigen::Index ref) {
  if (u.size() != grid.size()) {
    throw ShapeMismatch(static_cast<std::size_t>(grid.size()), static_cast<std::size_t>(u.size()));
  }
  detail::check_finite(u, "iterate");
  VectorX<Scalar> w = convolve(kernel, grid, potential_samples.cwiseProduct(u));
  const Scalar denominator = w[ref];
  if (!(std::abs(denominator) >= Scalar(1e-300))) throw DenominatorVanished(static_cast<double>(denominator));
  w /= denominator;
  w[ref] = Scalar(1);
  detail::check_finite(w, "iterate");
  return {{std::move(w), ref}, denominator};
}

}  // namespace detail

/// One ratio-normalized application of the Green's operator:
/// u_{n+1}(x) = ∫G(x-x')V u_n dx' / ∫G(x_ref-x')V u_n dx'.
template <typename Scalar, typename Derived>
BasicWavefunction<Scalar> iterate_once(const BasicGreensKernel<Scalar>& kernel, const BasicGrid<Scalar>& grid,
                                       const BasicPotential<Scalar>& potential, const Eigen::MatrixBase<Derived>& u_n,
                                       Scalar x_ref) {
  const Eigen::Index ref = reference_index(grid, x_ref);
  const VectorX<Scalar> u = u_n.template cast<Scalar>();
  return detail::step(kernel, grid, potential.sample(grid), u, ref).next;
}

/// Iterates the normalized Green's map at fixed ε until both the sup-norm
/// change of u and the relative change of λ fall below their tolerances.
/// λ is 1 / ∫G(x_ref-x')V u dx' evaluated on the final iterate.
///
/// Non-convergence is reported through `converged`, not thrown.
template <typename Scalar>
BasicIterateOutcome<Scalar> run_iteration(Scalar epsilon, const BasicGrid<Scalar>& grid,
                                          const BasicPotential<Scalar>& potential,
                                          const BasicIterationConfig<Scalar>& cfg) {
  const BasicGreensKernel<Scalar> kernel(epsilon);
  validate_config(cfg, grid);
  validate_on_grid(potential, grid);
  const Eigen::Index ref = reference_index(grid, cfg.x_ref);
  const VectorX<Scalar> v = potential.sample(grid);

  VectorX<Scalar> u = initial_samples(cfg, grid);
  if (std::abs(u[ref]) > Scalar(0)) u /= u[ref];

  BasicIterateOutcome<Scalar> out;
  out.epsilon = epsilon;
  Scalar lambda_prev = std::numeric_limits<Scalar>::quiet_NaN();
  for (int n = 0; n < cfg.max_iterations; ++n) {
    auto [next, denominator] = detail::step(kernel, grid, v, u, ref);
    const Scalar residual = (next.samples - u).cwiseAbs().maxCoeff();
    const Scalar lambda = Scalar(1) / denominator;
    const Scalar lambda_change = std::abs(lambda - lambda_prev) / std::abs(lambda);

    out.residual_history.push_back(residual);
    out.lambda_history.push_back(lambda);
    out.iterations_used = n + 1;
    u = std::move(next.samples);
    lambda_prev = lambda;

    if (residual <= cfg.u_tolerance && lambda_change <= cfg.lambda_tolerance) {
      out.converged = true;
      break;
    }
  }

  const VectorX<Scalar> weighted = v.cwiseProduct(u);
  const Scalar denominator = detail::convolve_point(detail::kernel_table(kernel, grid), weighted, ref, grid.spacing());
  if (!(std::abs(denominator) >= Scalar(1e-300))) throw DenominatorVanished(static_cast<double>(denominator));
  out.lambda = Scalar(1) / denominator;
  if (!std::isfinite(static_cast<double>(out.lambda)) || !(out.lambda > Scalar(0))) out.converged = false;
  out.u = {std::move(u), ref};
  return out;
}

/// λ from the differential equation at x_ref: (-u''(x_ref) + ε) / V(x_ref),
/// with u'' from the 5-point central difference.
template <typename Scalar>
Scalar lambda_from_curvature(const BasicIterateOutcome<Scalar>& outcome, const BasicGrid<Scalar>& grid,
                             const BasicPotential<Scalar>& potential, Scalar x_ref) {
  if (!outcome.converged) throw ConfigError("curvature estimate needs a converged outcome");
  const Eigen::Index i = reference_index(grid, x_ref);
  if (i < 2 || i > grid.size() - 3) throw ConfigError("x_ref needs two grid neighbours on each side");
  const Scalar v_ref = potential(x_ref);
  if (!(v_ref > Scalar(0))) throw ConfigError("V(x_ref) must be positive for the curvature estimate");

  const auto& u = outcome.u.samples;
  const Scalar h = grid.spacing();
  const Scalar second =
      (-u[i - 2] + Scalar(16) * u[i - 1] - Scalar(30) * u[i] + Scalar(16) * u[i + 1] - u[i + 2]) / (Scalar(12) * h * h);
  return (-second + outcome.epsilon) / v_ref;
}

/// Least-squares slope of -ln u(x) over grid points in [x_lo, x_hi]. For a
/// potential that has died off in the window this estimates √ε.
template <typename Scalar, typename Derived>
Scalar measure_tail_decay(const BasicGrid<Scalar>& grid, const Eigen::MatrixBase<Derived>& u, Scalar x_lo,
                          Scalar x_hi) {
  if (u.size() != grid.size()) {
    throw ShapeMismatch(static_cast<std::size_t>(grid.size()), static_cast<std::size_t>(u.size()));
  }
  if (!(x_lo > Scalar(0)) || !(x_hi > x_lo) || !(x_hi < grid.half_width())) {
    throw ConfigError("tail window must satisfy 0 < x_lo < x_hi < L");
  }
  std::vector<Scalar> xs, ys;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Scalar x = grid.point(i);
    if (x < x_lo || x > x_hi) continue;
    const Scalar value = Scalar(u(i));
    if (!(value > Scalar(0))) {
      throw NonPositiveTail("u(" + std::to_string(static_cast<double>(x)) + ") <= 0 inside the tail window");
    }
    xs.push_back(x);
    ys.push_back(-std::log(value));
  }
  if (xs.size() < 2) throw ConfigError("tail window contains fewer than two grid points");
  Scalar mean_x(0), mean_y(0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mean_x += xs[k];
    mean_y += ys[k];
  }
  mean_x /= Scalar(xs.size());
  mean_y /= Scalar(xs.size());
  Scalar sxx(0), sxy(0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mean_x) * (xs[k] - mean_x);
    sxy += (xs[k] - mean_x) * (ys[k] - mean_y);
  }
  return sxy / sxx;
}

template <typename Scalar>
Scalar measure_tail_decay(const BasicIterateOutcome<Scalar>& outcome, const BasicGrid<Scalar>& grid, Scalar x_lo,
                          Scalar x_hi) {
  return measure_tail_decay(grid, outcome.u.samples, x_lo, x_hi);
}

}  // namespace greenbound
