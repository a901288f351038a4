#include <doctest.h>

#include <cmath>

#include "greenbound/iteration.hpp"
#include "greenbound/oracle.hpp"

using namespace greenbound;

namespace {

// Even ground state of the unit-depth finite well |x| <= a at coupling λ:
// √(λ-ε) tan(√(λ-ε) a) = √ε, solved by bisection on ε ∈ (0, λ).
double square_well_epsilon(double lambda, double a) {
  auto f = [&](double eps) {
    const double k = std::sqrt(lambda - eps);
    return k * std::tan(k * a) - std::sqrt(eps);
  };
  // For λa² < (π/2)² the left side is continuous on (0, λ); f(0+) > 0, f(λ-) < 0.
  double lo = 1e-14, hi = lambda - 1e-14;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("oracle: Poschl-Teller lambda = 2 gives eps = 1") {
  const auto g = make_grid(20.0, 4001);
  const auto r = oracle_ground_state(g, poschl_teller(), 2.0);
  CHECK(std::abs(r.epsilon - 1.0) <= 2e-3);
  CHECK(r.ground_state[g.center_index()] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.ground_state[0] == 0.0);
  CHECK(r.ground_state[g.size() - 1] == 0.0);
  // Ground state is sech(x).
  for (double x : {0.5, 2.0, 6.0}) {
    CHECK(r.ground_state[g.index_of(x)] == doctest::Approx(1 / std::cosh(x)).epsilon(1e-4));
  }
}

TEST_CASE("oracle: finite square well matches the transcendental equation") {
  // Edges halfway between nodes (h = 0.01), so the sampled well has width 2a exactly.
  const double a = 1.005;
  const double exact = square_well_epsilon(1.0, a);
  CHECK(std::abs(std::sqrt(1 - exact) * std::tan(std::sqrt(1 - exact) * a) - std::sqrt(exact)) <= 1e-12);
  const auto r = oracle_ground_state(make_grid(20.0, 4001), square_well(a), 1.0);
  MESSAGE("square well: oracle " << r.epsilon << ", exact " << exact);
  CHECK(std::abs(r.epsilon - exact) <= 1e-3);
}

TEST_CASE("oracle: ground state is nodeless") {
  const auto g = make_grid(20.0, 2001);
  for (const auto& [v, lambda] : {std::pair{inverted_gaussian(), 1.0}, std::pair{poschl_teller(), 2.0},
                                  std::pair{square_well(1.0), 1.0}}) {
    const auto r = oracle_ground_state(g, v, lambda);
    CHECK((r.ground_state.segment(1, g.size() - 2).array() > 0.0).all());
  }
}

TEST_CASE("oracle: second-order grid refinement") {
  double prev_eps = 0, prev_diff = 0;
  for (Eigen::Index n : {501, 1001, 2001, 4001}) {
    const auto g = make_grid(20.0, n);
    const double eps = oracle_ground_state(g, inverted_gaussian(), 1.0).epsilon;
    if (prev_eps != 0) {
      const double diff = std::abs(eps - prev_eps);
      CHECK(diff <= 0.1 * std::pow(2 * g.spacing(), 2));
      if (prev_diff != 0) CHECK(prev_diff / diff >= 3.5);
      prev_diff = diff;
    }
    prev_eps = eps;
  }
}

TEST_CASE("oracle: errors") {
  const auto g = make_grid(20.0, 2001);
  CHECK_THROWS_AS(oracle_ground_state(g, inverted_gaussian(), 1e-3), NoBoundState);
  CHECK_THROWS_AS(oracle_ground_state(g, inverted_gaussian(), -1.0), ConfigError);
  CHECK_THROWS_AS(oracle_ground_state(make_grid(20.0, 11), inverted_gaussian(), 1.0), ConfigError);
  CHECK_THROWS_AS(oracle_ground_state(g, inverted_gaussian(), 1.0, 20.0), ConfigError);
}

TEST_CASE("oracle and Green's iteration invert each other") {
  const auto g = make_grid(20.0, 4001);
  for (const auto& [v, lambda] : {std::pair{inverted_gaussian(), 1.0}, std::pair{poschl_teller(), 2.0},
                                  std::pair{square_well(1.0), 1.0}}) {
    const auto r = oracle_ground_state(g, v, lambda);
    const auto out = run_iteration(r.epsilon, g, v, IterationConfig{});
    REQUIRE(out.converged);
    MESSAGE(v.name << ": lambda " << lambda << " -> eps " << r.epsilon << " -> lambda " << out.lambda);
    CHECK(std::abs(out.lambda - lambda) <= 1e-2 * lambda);
  }
}
