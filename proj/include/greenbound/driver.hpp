#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "greenbound/errors.hpp"
#include "greenbound/grid.hpp"
#include "greenbound/iteration.hpp"
#include "greenbound/lambda_model.hpp"
#include "greenbound/potential.hpp"

namespace greenbound {

enum class Strategy { model_accelerated, naive_interpolation, bisection };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::model_accelerated:
      return "model_accelerated";
    case Strategy::naive_interpolation:
      return "naive_interpolation";
    case Strategy::bisection:
      return "bisection";
  }
  return "unknown";
}

template <typename Scalar>
struct BasicSolveReport {
  Scalar target_lambda{};
  Scalar final_epsilon = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar final_lambda_achieved = std::numeric_limits<Scalar>::quiet_NaN();
  int full_solves_used = 0;
  long total_inner_iterations = 0;
  Strategy strategy = Strategy::model_accelerated;
  std::vector<BasicSamplePoint<Scalar>> samples;
  std::optional<BasicLambdaEpsilonModel<Scalar>> model;
  bool converged = false;
};

using SolveReport = BasicSolveReport<double>;

/// An inversion that could not reach the target. Carries everything computed so far.
template <typename Scalar>
class BasicSolveFailure : public NumericError {
 public:
  enum class Reason { model_inversion_failed, solve_cap_exceeded, bracket_invalid };

  BasicSolveFailure(Reason reason, const std::string& detail, BasicSolveReport<Scalar> partial)
      : NumericError(std::string(name(reason)) + ": " + detail), reason_(reason), partial_(std::move(partial)) {}

  Reason reason() const noexcept { return reason_; }
  const BasicSolveReport<Scalar>& partial_report() const noexcept { return partial_; }

  static std::string_view name(Reason r) {
    switch (r) {
      case Reason::model_inversion_failed:
        return "ModelInversionFailed";
      case Reason::solve_cap_exceeded:
        return "SolveCapExceeded";
      case Reason::bracket_invalid:
        return "BracketInvalid";
    }
    return "SolveFailure";
  }

 private:
  Reason reason_;
  BasicSolveReport<Scalar> partial_;
};

using SolveFailure = BasicSolveFailure<double>;

template <typename Scalar>
struct BasicSolveOptions {
  /// Seed energies for the accelerated strategy. Empty picks {0.3, 0.9} for a
  /// symmetric potential with x_ref = 0, {0.3, 0.6, 0.9} otherwise.
  std::vector<Scalar> seeds;
  std::pair<Scalar, Scalar> bracket{Scalar(0.1), Scalar(1.5)};
  Scalar tol_rel = Scalar(1e-6);
  int solve_cap = 12;
  int bracket_cap = 100;
};

using SolveOptions = BasicSolveOptions<double>;

template <typename Scalar>
struct BasicSweepRow {
  BasicSamplePoint<Scalar> sample;
  int iterations = 0;
};

template <typename Scalar>
struct BasicSweepFailure {
  Scalar epsilon{};
  std::string reason;
};

template <typename Scalar>
struct BasicSweepResult {
  std::vector<BasicSweepRow<Scalar>> rows;
  std::vector<BasicSweepFailure<Scalar>> failures;

  std::vector<BasicSamplePoint<Scalar>> samples() const {
    std::vector<BasicSamplePoint<Scalar>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.sample);
    return out;
  }
};

using SweepRow = BasicSweepRow<double>;
using SweepResult = BasicSweepResult<double>;

/// True when the two-coefficient line applies: symmetric V and x_ref = 0.
template <typename Scalar>
bool uses_symmetric_model(const BasicPotential<Scalar>& potential, const BasicIterationConfig<Scalar>& cfg) {
  return potential.symmetric_about_zero && cfg.x_ref == Scalar(0);
}

/// One run_iteration per ε, in input order. Non-converged or failed runs go
/// to `failures` and the sweep continues. Runs are independent, so up to
/// `threads` of them execute concurrently; the result does not depend on it.
template <typename Scalar>
BasicSweepResult<Scalar> sweep(const BasicGrid<Scalar>& grid, const BasicPotential<Scalar>& potential,
                               const BasicIterationConfig<Scalar>& cfg, const std::vector<Scalar>& eps_values,
                               unsigned threads = 1) {
  for (std::size_t i = 0; i < eps_values.size(); ++i) {
    if (!(eps_values[i] > Scalar(0))) throw ConfigError("sweep energies must be positive");
    if (i > 0 && eps_values[i] < eps_values[i - 1]) throw ConfigError("sweep energies must be sorted ascending");
  }
  validate_config(cfg, grid);
  validate_on_grid(potential, grid);

  struct Slot {
    std::optional<BasicSweepRow<Scalar>> row;
    std::string error;
  };
  std::vector<Slot> slots(eps_values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < eps_values.size(); i = next++) {
      try {
        const auto outcome = run_iteration(eps_values[i], grid, potential, cfg);
        if (outcome.converged) {
          slots[i].row = BasicSweepRow<Scalar>{{eps_values[i], outcome.lambda, outcome.final_residual()},
                                               outcome.iterations_used};
        } else {
          slots[i].error = "not converged after " + std::to_string(outcome.iterations_used) + " iterations";
        }
      } catch (const NumericError& e) {
        slots[i].error = e.what();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(eps_values.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  BasicSweepResult<Scalar> result;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].row) {
      result.rows.push_back(*slots[i].row);
    } else {
      result.failures.push_back({eps_values[i], slots[i].error});
    }
  }
  return result;
}

namespace detail {

// Runs full solves and records them into a report.
template <typename Scalar>
class SolveLedger {
 public:
  SolveLedger(const BasicGrid<Scalar>& grid, const BasicPotential<Scalar>& potential,
              const BasicIterationConfig<Scalar>& cfg, Scalar target, Strategy strategy)
      : grid_(grid), potential_(potential), cfg_(cfg) {
    report_.target_lambda = target;
    report_.strategy = strategy;
  }

  const BasicSamplePoint<Scalar>& solve(Scalar eps) {
    const auto outcome = run_iteration(eps, grid_, potential_, cfg_);
    const Scalar residual =
        outcome.converged ? outcome.final_residual() : std::numeric_limits<Scalar>::infinity();
    report_.samples.push_back({eps, outcome.lambda, residual});
    report_.full_solves_used += 1;
    report_.total_inner_iterations += outcome.iterations_used;
    return report_.samples.back();
  }

  bool usable(const BasicSamplePoint<Scalar>& s) const { return s.residual <= cfg_.u_tolerance; }

  bool hits(const BasicSamplePoint<Scalar>& s, Scalar tol) const {
    return usable(s) && std::abs(s.lambda - report_.target_lambda) <= tol * report_.target_lambda;
  }

  BasicSolveReport<Scalar> finish(const BasicSamplePoint<Scalar>& s) {
    report_.final_epsilon = s.epsilon;
    report_.final_lambda_achieved = s.lambda;
    report_.converged = true;
    return report_;
  }

  /// Best sample so far, for partial reports.
  BasicSolveReport<Scalar> partial() const {
    BasicSolveReport<Scalar> r = report_;
    const BasicSamplePoint<Scalar>* best = nullptr;
    for (const auto& s : r.samples) {
      if (!usable(s)) continue;
      if (!best || std::abs(s.lambda - r.target_lambda) < std::abs(best->lambda - r.target_lambda)) best = &s;
    }
    if (best) {
      r.final_epsilon = best->epsilon;
      r.final_lambda_achieved = best->lambda;
    }
    r.converged = false;
    return r;
  }

  BasicSolveReport<Scalar>& report() { return report_; }

 private:
  const BasicGrid<Scalar>& grid_;
  const BasicPotential<Scalar>& potential_;
  const BasicIterationConfig<Scalar>& cfg_;
  BasicSolveReport<Scalar> report_;
};

template <typename Scalar>
void require_target(Scalar target, Scalar tol) {
  if (!(target > Scalar(0)) || !std::isfinite(static_cast<double>(target))) {
    throw ConfigError("target lambda must be positive and finite");
  }
  if (!(tol > Scalar(0))) throw ConfigError("relative tolerance must be positive");
}

}  // namespace detail

/// Inverts λ → ε with the λ(ε) model: solve at the seeds, fit, predict ε*,
/// solve there, and refit with the new sample until the achieved λ is within
/// `tol_rel`. Once three converged samples exist the refit uses the
/// three-coefficient form on the three samples closest to the target (the
/// two-coefficient line through the nearest two if that system is
/// ill-conditioned), which acts as a secant-like update through the model.
template <typename Scalar>
BasicSolveReport<Scalar> solve_for_lambda_accelerated(const BasicGrid<Scalar>& grid,
                                                      const BasicPotential<Scalar>& potential,
                                                      const BasicIterationConfig<Scalar>& cfg, Scalar lambda_target,
                                                      const BasicSolveOptions<Scalar>& opts = {}) {
  using Failure = BasicSolveFailure<Scalar>;
  detail::require_target(lambda_target, opts.tol_rel);
  const bool symmetric = uses_symmetric_model(potential, cfg);
  std::vector<Scalar> seeds = opts.seeds;
  if (seeds.empty()) {
    seeds = symmetric ? std::vector<Scalar>{Scalar(0.3), Scalar(0.9)}
                      : std::vector<Scalar>{Scalar(0.3), Scalar(0.6), Scalar(0.9)};
  }
  const std::size_t needed = symmetric ? 2 : 3;
  if (seeds.size() != needed) {
    throw ConfigError("accelerated solve needs " + std::to_string(needed) + " seed energies for this potential, got " +
                      std::to_string(seeds.size()));
  }
  for (Scalar s : seeds) {
    if (!(s > Scalar(0))) throw ConfigError("seed energies must be positive");
  }
  validate_config(cfg, grid);
  validate_on_grid(potential, grid);

  detail::SolveLedger<Scalar> ledger(grid, potential, cfg, lambda_target, Strategy::model_accelerated);
  for (Scalar s : seeds) ledger.solve(s);
  for (const auto& s : ledger.report().samples) {
    if (ledger.hits(s, opts.tol_rel)) return ledger.finish(s);
  }

  while (true) {
    std::vector<BasicSamplePoint<Scalar>> usable;
    for (const auto& s : ledger.report().samples) {
      if (ledger.usable(s)) usable.push_back(s);
    }
    std::stable_sort(usable.begin(), usable.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.lambda - lambda_target) < std::abs(b.lambda - lambda_target);
    });

    Scalar eps_next{};
    try {
      BasicLambdaEpsilonModel<Scalar> model;
      const Scalar gate = cfg.u_tolerance;
      if (usable.size() < 3) {
        model = symmetric ? fit_symmetric(usable, gate) : fit_general(usable, cfg.x_ref, gate);
      } else {
        const std::vector<BasicSamplePoint<Scalar>> nearest(usable.begin(), usable.begin() + 3);
        try {
          model = fit_general(nearest, cfg.x_ref, gate);
        } catch (const NumericError&) {
          model = fit_symmetric(std::vector<BasicSamplePoint<Scalar>>(usable.begin(), usable.begin() + 2), gate);
        }
      }
      ledger.report().model = model;
      eps_next = invert(model, lambda_target);
    } catch (const NumericError& e) {
      throw Failure(Failure::Reason::model_inversion_failed, e.what(), ledger.partial());
    }

    if (ledger.report().full_solves_used >= opts.solve_cap) {
      throw Failure(Failure::Reason::solve_cap_exceeded,
                    "no solution within tolerance after " + std::to_string(opts.solve_cap) + " full solves",
                    ledger.partial());
    }
    const auto& sample = ledger.solve(eps_next);
    if (ledger.hits(sample, opts.tol_rel)) return ledger.finish(sample);
  }
}

namespace detail {

template <typename Scalar>
BasicSolveReport<Scalar> bracketed_solve(const BasicGrid<Scalar>& grid, const BasicPotential<Scalar>& potential,
                                         const BasicIterationConfig<Scalar>& cfg, Scalar lambda_target,
                                         const BasicSolveOptions<Scalar>& opts, Strategy strategy) {
  using Failure = BasicSolveFailure<Scalar>;
  require_target(lambda_target, opts.tol_rel);
  SolveLedger<Scalar> ledger(grid, potential, cfg, lambda_target, strategy);
  auto [lo, hi] = opts.bracket;
  if (!(lo > Scalar(0)) || !(hi > lo)) {
    throw Failure(Failure::Reason::bracket_invalid, "bracket must satisfy 0 < eps_lo < eps_hi", ledger.partial());
  }
  validate_config(cfg, grid);
  validate_on_grid(potential, grid);

  const auto s_lo = ledger.solve(lo);
  const auto s_hi = ledger.solve(hi);
  for (const auto& s : {s_lo, s_hi}) {
    if (ledger.hits(s, opts.tol_rel)) return ledger.finish(s);
  }
  if (!ledger.usable(s_lo) || !ledger.usable(s_hi) || !(s_lo.lambda < lambda_target) ||
      !(lambda_target < s_hi.lambda)) {
    throw Failure(Failure::Reason::bracket_invalid,
                  "lambda(eps_lo) < target < lambda(eps_hi) does not hold on the bracket", ledger.partial());
  }

  Scalar f_lo = s_lo.lambda - lambda_target;
  Scalar f_hi = s_hi.lambda - lambda_target;
  int stale_side = 0;
  while (ledger.report().full_solves_used < opts.bracket_cap) {
    Scalar eps;
    if (strategy == Strategy::bisection) {
      eps = Scalar(0.5) * (lo + hi);
    } else {
      // Illinois-modified regula falsi: linear interpolation of λ(ε) between the bracket ends.
      eps = lo - f_lo * (hi - lo) / (f_hi - f_lo);
      if (!(eps > lo && eps < hi)) eps = Scalar(0.5) * (lo + hi);
    }
    const auto s = ledger.solve(eps);
    if (ledger.hits(s, opts.tol_rel)) return ledger.finish(s);
    if (!ledger.usable(s)) {
      throw Failure(Failure::Reason::bracket_invalid,
                    "run at eps=" + std::to_string(static_cast<double>(eps)) + " did not converge", ledger.partial());
    }
    const Scalar f = s.lambda - lambda_target;
    if (f < Scalar(0)) {
      lo = eps;
      f_lo = f;
      if (stale_side == -1) f_hi /= Scalar(2);
      stale_side = -1;
    } else {
      hi = eps;
      f_hi = f;
      if (stale_side == 1) f_lo /= Scalar(2);
      stale_side = 1;
    }
  }
  throw Failure(Failure::Reason::solve_cap_exceeded,
                "bracket search exceeded " + std::to_string(opts.bracket_cap) + " full solves", ledger.partial());
}

}  // namespace detail

/// Baseline: bisection on ε with one full solve per probe.
template <typename Scalar>
BasicSolveReport<Scalar> solve_for_lambda_naive(const BasicGrid<Scalar>& grid, const BasicPotential<Scalar>& potential,
                                                const BasicIterationConfig<Scalar>& cfg, Scalar lambda_target,
                                                const BasicSolveOptions<Scalar>& opts = {}) {
  return detail::bracketed_solve(grid, potential, cfg, lambda_target, opts, Strategy::bisection);
}

/// Optional baseline: regula falsi on sampled λ(ε), the "interpolate the
/// sweep" procedure without a model. Not part of the headline comparison.
template <typename Scalar>
BasicSolveReport<Scalar> solve_for_lambda_interpolation(const BasicGrid<Scalar>& grid,
                                                        const BasicPotential<Scalar>& potential,
                                                        const BasicIterationConfig<Scalar>& cfg, Scalar lambda_target,
                                                        const BasicSolveOptions<Scalar>& opts = {}) {
  return detail::bracketed_solve(grid, potential, cfg, lambda_target, opts, Strategy::naive_interpolation);
}

template <typename Scalar>
BasicSolveReport<Scalar> solve_for_lambda(Strategy strategy, const BasicGrid<Scalar>& grid,
                                          const BasicPotential<Scalar>& potential,
                                          const BasicIterationConfig<Scalar>& cfg, Scalar lambda_target,
                                          const BasicSolveOptions<Scalar>& opts = {}) {
  switch (strategy) {
    case Strategy::model_accelerated:
      return solve_for_lambda_accelerated(grid, potential, cfg, lambda_target, opts);
    case Strategy::bisection:
      return solve_for_lambda_naive(grid, potential, cfg, lambda_target, opts);
    case Strategy::naive_interpolation:
      return solve_for_lambda_interpolation(grid, potential, cfg, lambda_target, opts);
  }
  throw ConfigError("unknown strategy");
}

template <typename Scalar>
struct BasicBenchmarkCell {
  Scalar target_lambda{};
  Strategy strategy{};
  std::optional<BasicSolveReport<Scalar>> report;
  std::string error;

  bool converged() const { return report && report->converged && error.empty(); }
};

using BenchmarkCell = BasicBenchmarkCell<double>;

/// One cell per (target, strategy), target-major. Failures are recorded in the cell.
template <typename Scalar>
std::vector<BasicBenchmarkCell<Scalar>> benchmark(const BasicGrid<Scalar>& grid, const BasicPotential<Scalar>& potential,
                                                  const BasicIterationConfig<Scalar>& cfg,
                                                  const std::vector<Scalar>& targets,
                                                  const std::vector<Strategy>& strategies,
                                                  const BasicSolveOptions<Scalar>& opts = {}) {
  if (strategies.empty()) throw ConfigError("benchmark needs at least one strategy");
  std::vector<BasicBenchmarkCell<Scalar>> table;
  for (Scalar target : targets) {
    for (Strategy strategy : strategies) {
      BasicBenchmarkCell<Scalar> cell{target, strategy, std::nullopt, {}};
      try {
        cell.report = solve_for_lambda(strategy, grid, potential, cfg, target, opts);
      } catch (const BasicSolveFailure<Scalar>& e) {
        cell.report = e.partial_report();
        cell.error = e.what();
      } catch (const NumericError& e) {
        cell.error = e.what();
      }
      table.push_back(std::move(cell));
    }
  }
  return table;
}

}  // namespace greenbound
