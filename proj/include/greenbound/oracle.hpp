#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "greenbound/errors.hpp"
#include "greenbound/grid.hpp"
#include "greenbound/potential.hpp"

// Deliberately independent of greens.hpp / iteration.hpp: this is the
// reference the Green's-function pipeline is checked against.

namespace greenbound {

template <typename Scalar>
struct BasicOracleResult {
  Scalar epsilon{};
  /// On the full grid, zero at ±L, equal to 1 at x_ref.
  VectorX<Scalar> ground_state;
  Scalar half_width{};
  Eigen::Index point_count = 0;
};

using OracleResult = BasicOracleResult<double>;

namespace detail {

/// Symmetric tridiagonal matrix with constant off-diagonal.
template <typename Scalar>
struct Tridiagonal {
  VectorX<Scalar> diag;
  Scalar off{};

  /// Number of eigenvalues strictly below `shift` (Sturm sequence).
  Eigen::Index count_below(Scalar shift) const {
    const Scalar off2 = off * off;
    const Scalar tiny = std::numeric_limits<Scalar>::min();
    Eigen::Index count = 0;
    Scalar q = diag[0] - shift;
    for (Eigen::Index k = 0;; ++k) {
      if (q == Scalar(0)) q = -tiny;
      if (q < Scalar(0)) ++count;
      if (k + 1 == diag.size()) break;
      q = diag[k + 1] - shift - off2 / q;
    }
    return count;
  }

  /// Solves (T - shift·I) x = b by forward elimination; requires shift below the spectrum.
  VectorX<Scalar> solve_shifted(Scalar shift, const VectorX<Scalar>& b) const {
    const Eigen::Index n = diag.size();
    VectorX<Scalar> pivot(n), y(n);
    pivot[0] = diag[0] - shift;
    y[0] = b[0];
    for (Eigen::Index k = 1; k < n; ++k) {
      const Scalar factor = off / pivot[k - 1];
      pivot[k] = diag[k] - shift - factor * off;
      y[k] = b[k] - factor * y[k - 1];
    }
    VectorX<Scalar> x(n);
    x[n - 1] = y[n - 1] / pivot[n - 1];
    for (Eigen::Index k = n - 1; k-- > 0;) x[k] = (y[k] - off * x[k + 1]) / pivot[k];
    return x;
  }
};

}  // namespace detail

/// Lowest eigenpair of the Dirichlet finite-difference operator -D₂ - λV on
/// the interior grid points, found by Sturm-count bisection plus inverse
/// iteration. Returns ε = -E_min.
template <typename Scalar>
BasicOracleResult<Scalar> oracle_ground_state(const BasicGrid<Scalar>& grid, const BasicPotential<Scalar>& potential,
                                              Scalar lambda, Scalar x_ref = Scalar(0)) {
  if (!(lambda > Scalar(0)) || !std::isfinite(static_cast<double>(lambda))) {
    throw ConfigError("oracle needs a positive, finite lambda");
  }
  const Scalar h = grid.spacing();
  const VectorX<Scalar> v = potential.sample(grid);
  if (!(h * h * lambda * v.maxCoeff() < Scalar(0.1))) {
    throw ConfigError("grid too coarse for the oracle: h^2 * lambda * max V must be < 0.1");
  }
  const Eigen::Index ref = grid.index_of(x_ref);
  if (ref <= 0 || ref >= grid.size() - 1) throw ConfigError("oracle x_ref must be an interior grid point");

  const Eigen::Index n = grid.size() - 2;
  detail::Tridiagonal<Scalar> op;
  op.off = Scalar(-1) / (h * h);
  op.diag.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) op.diag[k] = Scalar(2) / (h * h) - lambda * v[k + 1];

  if (op.count_below(Scalar(0)) == 0) {
    throw NoBoundState("no negative eigenvalue for lambda=" + std::to_string(static_cast<double>(lambda)) +
                       " on the truncated domain");
  }

  // Gershgorin lower bound, then bisect on the Sturm count.
  Scalar lo = op.diag.minCoeff() - Scalar(2) * std::abs(op.off);
  Scalar hi = Scalar(0);
  for (int it = 0; it < 300; ++it) {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (op.count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const Scalar energy = Scalar(0.5) * (lo + hi);
  if (!(energy < Scalar(0))) throw NoBoundState("lowest eigenvalue is not negative");

  // Shift just below the eigenvalue keeps the shifted matrix positive definite.
  const Scalar shift = energy - Scalar(1e-6) * std::max(Scalar(1), std::abs(energy));
  VectorX<Scalar> x = VectorX<Scalar>::Ones(n);
  for (int it = 0; it < 4; ++it) {
    x = op.solve_shifted(shift, x);
    x /= x.cwiseAbs().maxCoeff();
  }

  BasicOracleResult<Scalar> out;
  out.epsilon = -energy;
  out.half_width = grid.half_width();
  out.point_count = grid.size();
  out.ground_state = VectorX<Scalar>::Zero(grid.size());
  out.ground_state.segment(1, n) = x / x[ref - 1];
  return out;
}

}  // namespace greenbound
