#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "greenbound/errors.hpp"
#include "greenbound/grid.hpp"

namespace greenbound {

/// Shape function V(x) of the attractive potential -λV(x), plus the metadata
/// the λ(ε) model relies on.
template <typename Scalar>
struct BasicPotential {
  std::function<Scalar(Scalar)> shape;
  std::string name;
  bool symmetric_about_zero = false;
  bool singular = false;
  bool vanishes_at_infinity = false;

  Scalar operator()(Scalar x) const { return shape(x); }

  VectorX<Scalar> sample(const BasicGrid<Scalar>& grid) const { return grid.sample(shape); }
};

using Potential = BasicPotential<double>;

/// V(x) = exp(-x^2/2).
template <typename Scalar = double>
BasicPotential<Scalar> inverted_gaussian() {
  return {[](Scalar x) { return std::exp(-x * x / Scalar(2)); }, "inverted-gaussian", true, false, true};
}

/// V(x) = sech^2(x); with λ = 2 the ground state is u = sech(x) at ε = 1.
template <typename Scalar = double>
BasicPotential<Scalar> poschl_teller() {
  return {[](Scalar x) {
            const Scalar s = Scalar(1) / std::cosh(x);
            return s * s;
          },
          "poschl-teller", true, false, true};
}

/// Unit-depth well on the closed interval |x| <= half_width.
template <typename Scalar = double>
BasicPotential<Scalar> square_well(Scalar half_width) {
  if (!(half_width > Scalar(0))) {
    throw ConfigError("square well half-width must be positive, got " +
                      std::to_string(static_cast<double>(half_width)));
  }
  return {[half_width](Scalar x) { return std::abs(x) <= half_width ? Scalar(1) : Scalar(0); }, "square-well",
          true, false, true};
}

/// Piecewise-linear interpolation of (x, V) rows, extended by zero outside.
template <typename Scalar = double>
BasicPotential<Scalar> tabulated(std::vector<std::pair<Scalar, Scalar>> rows, std::string name = "tabulated") {
  if (rows.size() < 4) {
    throw ConfigError("tabulated potential needs at least 4 points, got " + std::to_string(rows.size()));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(static_cast<double>(rows[i].first)) || !std::isfinite(static_cast<double>(rows[i].second))) {
      throw ConfigError("tabulated potential row " + std::to_string(i) + " is not finite");
    }
    if (rows[i].second < Scalar(0)) {
      throw ConfigError("tabulated potential row " + std::to_string(i) + " has negative V");
    }
    if (i > 0 && !(rows[i].first > rows[i - 1].first)) {
      throw ConfigError("tabulated potential abscissae must be strictly increasing (row " + std::to_string(i) + ")");
    }
  }

  auto table = std::make_shared<const std::vector<std::pair<Scalar, Scalar>>>(std::move(rows));
  auto eval = [table](Scalar x) -> Scalar {
    const auto& t = *table;
    if (x < t.front().first || x > t.back().first) return Scalar(0);
    auto it = std::upper_bound(t.begin(), t.end(), x, [](Scalar v, const auto& row) { return v < row.first; });
    if (it == t.end()) return t.back().second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const Scalar s = (x - lo.first) / (hi.first - lo.first);
    return lo.second + s * (hi.second - lo.second);
  };

  bool symmetric = true;
  for (const auto& [x, v] : *table) {
    if (std::abs(eval(-x) - v) > Scalar(1e-8)) {
      symmetric = false;
      break;
    }
  }
  return {eval, std::move(name), symmetric, false, true};
}

/// Checks the potential's declared metadata against its samples on `grid`:
/// non-negativity, mirror symmetry when declared, and decay at ±L when
/// declared vanishing. Throws ConfigError naming the first violation.
template <typename Scalar>
void validate_on_grid(const BasicPotential<Scalar>& potential, const BasicGrid<Scalar>& grid) {
  const auto v = potential.sample(grid);
  const Eigen::Index n = grid.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(static_cast<double>(v[i]))) {
      throw ConfigError("potential '" + potential.name + "' is not finite at x=" +
                        std::to_string(static_cast<double>(grid.point(i))));
    }
    if (v[i] < Scalar(0)) {
      throw ConfigError("potential '" + potential.name + "' is negative at x=" +
                        std::to_string(static_cast<double>(grid.point(i))));
    }
  }
  if (potential.symmetric_about_zero) {
    for (Eigen::Index i = 0; i < n / 2; ++i) {
      if (std::abs(v[i] - v[n - 1 - i]) > Scalar(1e-14) * std::max(Scalar(1), std::abs(v[i]))) {
        throw ConfigError("potential '" + potential.name + "' is declared symmetric but V(" +
                          std::to_string(static_cast<double>(grid.point(i))) + ") != V(-x)");
      }
    }
  }
  if (potential.vanishes_at_infinity) {
    const Scalar peak = v.maxCoeff();
    if (peak > Scalar(0) && std::max(v[0], v[n - 1]) >= Scalar(1e-10) * peak) {
      throw ConfigError("potential '" + potential.name + "' does not vanish at the domain edge ±" +
                        std::to_string(static_cast<double>(grid.half_width())) + "; increase L");
    }
  }
}

/// Reads a two-column "x V" table ('#' starts a comment). Throws ConfigError
/// naming the path when the file is missing or malformed.
Potential load_tabulated_file(const std::string& path);

}  // namespace greenbound
