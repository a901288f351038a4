#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "greenbound/errors.hpp"

namespace greenbound {

/// One converged (ε, λ) pair and the final sup-norm residual of the run that produced it.
template <typename Scalar>
struct BasicSamplePoint {
  Scalar epsilon{};
  Scalar lambda{};
  Scalar residual{};
};

using SamplePoint = BasicSamplePoint<double>;

/// λ(ε) = a1·exp(-√ε·x_ref) + a2·√ε·exp(-√ε·x_ref) + a3·ε.
///
/// For a potential symmetric about 0 with x_ref = 0 the even ground state has
/// no slope at the origin, the a2 term drops and the relation is a straight
/// line a1 + a3·ε (`symmetric_reduced`).
template <typename Scalar>
struct BasicLambdaEpsilonModel {
  Scalar a1{};
  Scalar a2{};
  Scalar a3{};
  Scalar x_ref{};
  bool symmetric_reduced = false;
  Scalar eps_min{};
  Scalar eps_max{};
};

using LambdaEpsilonModel = BasicLambdaEpsilonModel<double>;

template <typename Scalar>
struct BasicPrediction {
  Scalar lambda{};
  /// ε lies outside the fit range by more than a quarter of its width.
  bool extrapolated = false;
};

using Prediction = BasicPrediction<double>;

/// Smallest ε the inversion will consider; the model is not meaningful near ε = 0.
inline constexpr double kEpsilonFloor = 1e-6;
inline constexpr double kDefaultResidualGate = 1e-10;
inline constexpr double kMaxCondition = 1e12;

namespace detail {

template <typename Scalar>
Scalar model_value(const BasicLambdaEpsilonModel<Scalar>& m, Scalar eps) {
  const Scalar s = std::sqrt(eps);
  const Scalar decay = std::exp(-s * m.x_ref);
  return m.a1 * decay + m.a2 * s * decay + m.a3 * eps;
}

template <typename Scalar>
Scalar model_slope(const BasicLambdaEpsilonModel<Scalar>& m, Scalar eps) {
  const Scalar s = std::sqrt(eps);
  const Scalar decay = std::exp(-s * m.x_ref);
  return (-m.a1 * m.x_ref * decay + m.a2 * decay * (Scalar(1) - s * m.x_ref)) / (Scalar(2) * s) + m.a3;
}

template <typename Scalar>
std::vector<BasicSamplePoint<Scalar>> gate(const std::vector<BasicSamplePoint<Scalar>>& samples, Scalar residual_gate) {
  std::vector<BasicSamplePoint<Scalar>> kept;
  for (const auto& s : samples) {
    if (!(s.epsilon > Scalar(0)) || !(s.lambda > Scalar(0)) || !std::isfinite(static_cast<double>(s.lambda))) {
      throw ConfigError("samples need positive, finite epsilon and lambda");
    }
    if (s.residual <= residual_gate) kept.push_back(s);
  }
  return kept;
}

template <typename Scalar>
std::size_t distinct_epsilons(const std::vector<BasicSamplePoint<Scalar>>& samples) {
  std::set<Scalar> eps;
  for (const auto& s : samples) eps.insert(s.epsilon);
  return eps.size();
}

template <typename Scalar>
void set_fit_range(BasicLambdaEpsilonModel<Scalar>& m, const std::vector<BasicSamplePoint<Scalar>>& samples) {
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                            [](const auto& a, const auto& b) { return a.epsilon < b.epsilon; });
  m.eps_min = lo->epsilon;
  m.eps_max = hi->epsilon;
}

template <typename Scalar>
void require_positive_on_range(const BasicLambdaEpsilonModel<Scalar>& m) {
  constexpr int probes = 33;
  for (int k = 0; k < probes; ++k) {
    const Scalar eps = m.eps_min + (m.eps_max - m.eps_min) * Scalar(k) / Scalar(probes - 1);
    if (!(model_value(m, eps) > Scalar(0))) {
      throw InvalidModel("fitted model predicts lambda <= 0 at eps=" + std::to_string(static_cast<double>(eps)));
    }
  }
}

}  // namespace detail

/// Two-coefficient line λ = a1 + a3·ε (x_ref = 0, symmetric potential).
/// Interpolates exactly two samples; least squares for more.
template <typename Scalar>
BasicLambdaEpsilonModel<Scalar> fit_symmetric(const std::vector<BasicSamplePoint<Scalar>>& samples,
                                              Scalar residual_gate = Scalar(kDefaultResidualGate)) {
  const auto kept = detail::gate(samples, residual_gate);
  if (detail::distinct_epsilons(kept) < 2) {
    throw DegenerateSamples("symmetric fit needs at least 2 converged samples with distinct epsilon, got " +
                            std::to_string(detail::distinct_epsilons(kept)));
  }
  BasicLambdaEpsilonModel<Scalar> m;
  m.symmetric_reduced = true;
  m.x_ref = Scalar(0);
  detail::set_fit_range(m, kept);
  if (m.eps_max - m.eps_min < Scalar(1e-8)) throw IllConditioned("epsilon spread below 1e-8");

  if (kept.size() == 2) {
    const auto& p = kept[0];
    const auto& q = kept[1];
    m.a3 = (q.lambda - p.lambda) / (q.epsilon - p.epsilon);
    m.a1 = p.lambda - m.a3 * p.epsilon;
  } else {
    const auto n = static_cast<Eigen::Index>(kept.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, 2> basis(n, 2);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      basis(i, 0) = Scalar(1);
      basis(i, 1) = kept[i].epsilon;
      rhs[i] = kept[i].lambda;
    }
    const Eigen::Matrix<Scalar, 2, 1> c = basis.colPivHouseholderQr().solve(rhs);
    m.a1 = c[0];
    m.a3 = c[1];
  }
  detail::require_positive_on_range(m);
  return m;
}

/// Full three-coefficient fit in the basis {exp(-√ε·x_ref), √ε·exp(-√ε·x_ref), ε}.
/// Solves the square system for exactly three samples, least squares otherwise.
template <typename Scalar>
BasicLambdaEpsilonModel<Scalar> fit_general(const std::vector<BasicSamplePoint<Scalar>>& samples, Scalar x_ref,
                                            Scalar residual_gate = Scalar(kDefaultResidualGate)) {
  const auto kept = detail::gate(samples, residual_gate);
  if (detail::distinct_epsilons(kept) < 3) {
    throw DegenerateSamples("general fit needs at least 3 converged samples with distinct epsilon, got " +
                            std::to_string(detail::distinct_epsilons(kept)));
  }
  const auto n = static_cast<Eigen::Index>(kept.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> basis(n, 3);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar s = std::sqrt(kept[i].epsilon);
    const Scalar decay = std::exp(-s * x_ref);
    basis(i, 0) = decay;
    basis(i, 1) = s * decay;
    basis(i, 2) = kept[i].epsilon;
    rhs[i] = kept[i].lambda;
  }
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, 3>> svd(basis);
  const auto& sv = svd.singularValues();
  const Scalar cond = sv[0] / sv[sv.size() - 1];
  if (!(cond <= Scalar(kMaxCondition))) {
    throw IllConditioned("basis condition number " + std::to_string(static_cast<double>(cond)) +
                         " exceeds 1e12; spread the epsilon samples");
  }
  const Eigen::Matrix<Scalar, 3, 1> c = basis.colPivHouseholderQr().solve(rhs);

  BasicLambdaEpsilonModel<Scalar> m;
  m.a1 = c[0];
  m.a2 = c[1];
  m.a3 = c[2];
  m.x_ref = x_ref;
  m.symmetric_reduced = false;
  detail::set_fit_range(m, kept);
  detail::require_positive_on_range(m);
  return m;
}

template <typename Scalar>
BasicPrediction<Scalar> predict(const BasicLambdaEpsilonModel<Scalar>& m, Scalar eps) {
  const Scalar margin = Scalar(0.25) * (m.eps_max - m.eps_min);
  return {detail::model_value(m, eps), eps < m.eps_min - margin || eps > m.eps_max + margin};
}

/// ε such that predict(m, ε) = λ_target. Closed form for the symmetric line;
/// otherwise bracketed Newton with bisection fallback on [kEpsilonFloor, ε_hi],
/// after checking that the model increases across the bracket.
template <typename Scalar>
Scalar invert(const BasicLambdaEpsilonModel<Scalar>& m, Scalar lambda_target) {
  if (!(lambda_target > Scalar(0)) || !std::isfinite(static_cast<double>(lambda_target))) {
    throw ConfigError("target lambda must be positive and finite");
  }
  const Scalar floor = Scalar(kEpsilonFloor);
  auto residual = [&](Scalar eps) { return detail::model_value(m, eps) - lambda_target; };

  if (m.symmetric_reduced && m.x_ref == Scalar(0)) {
    if (!(m.a3 > Scalar(0))) throw NonMonotone("linear model has non-positive slope a3");
    if (!(residual(floor) < Scalar(0))) {
      throw OutOfRange("target lambda " + std::to_string(static_cast<double>(lambda_target)) +
                       " is below the model minimum " + std::to_string(static_cast<double>(m.a1 + m.a3 * floor)));
    }
    return (lambda_target - m.a1) / m.a3;
  }

  Scalar hi = std::max(m.eps_max, Scalar(2) * floor);
  while (residual(hi) < Scalar(0)) {
    hi *= Scalar(2);
    if (hi > Scalar(1e8)) throw OutOfRange("target lambda is above the model range");
  }
  constexpr int probes = 257;
  Scalar prev = detail::model_value(m, floor);
  for (int k = 1; k < probes; ++k) {
    const Scalar eps = floor + (hi - floor) * Scalar(k) / Scalar(probes - 1);
    const Scalar cur = detail::model_value(m, eps);
    if (cur < prev - Scalar(1e-14) * std::abs(prev)) {
      throw NonMonotone("model decreases near eps=" + std::to_string(static_cast<double>(eps)));
    }
    prev = cur;
  }
  if (!(residual(floor) < Scalar(0))) {
    throw OutOfRange("target lambda " + std::to_string(static_cast<double>(lambda_target)) +
                     " is below the model minimum on the search bracket");
  }

  Scalar lo = floor;
  Scalar eps = Scalar(0.5) * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const Scalar f = residual(eps);
    if (f == Scalar(0)) break;
    if (f < Scalar(0)) {
      lo = eps;
    } else {
      hi = eps;
    }
    const Scalar slope = detail::model_slope(m, eps);
    Scalar next = eps - f / slope;
    if (!(slope > Scalar(0)) || !(next > lo && next < hi)) next = Scalar(0.5) * (lo + hi);
    const Scalar step = std::abs(next - eps);
    eps = next;
    if (step <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * eps) break;
  }
  return eps;
}

}  // namespace greenbound
