// Brute-force oracles and property checks: path deficiency, dominated
// interior, multi-step dominance, and the monotone distance-based trading
// function.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfmm/arbitrage.hpp"
#include "cfmm/types.hpp"

namespace cfmm {

struct StrategyStep {
  Trade trade;
  Reserves reserves;  // after the step
};

struct StrategyTrace {
  std::vector<StrategyStep> steps;
  double cumulative_profit = 0.0;  // c^T (R^0 - R^m)
  int nonzero_input_steps = 0;
};

struct CheckFailure {
  std::uint64_t seed = 0;
  std::string inputs;
  double observed = 0.0;
  double bound = 0.0;
};

struct CheckReport {
  std::string check;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<CheckFailure> failures;
  bool passed() const { return failures.empty(); }
};

// Exhaustive grid search over post-trade reserves (successively refined to
// the requested pitch; last coordinate placed on the frontier by bisection).
// Refuses n > 3. Result is within ~2 * grid_pitch * ||c||_1 of the optimum.
ArbitrageResult brute_force_arbitrage(const PoolSpec& spec, const PriceVector& c,
                                      double grid_pitch);

// Samples random multi-step strategies and checks that none beats the
// single-shot solver, that end states stay in the initial reachable set, and
// that fee pools dominate strictly.
CheckReport check_path_deficiency(const PoolSpec& spec, const PriceVector& c,
                                  int num_strategies, int max_steps,
                                  std::uint64_t rng_seed);

// Frontier/interior classification inside the level-set reachable set.
// Throws std::invalid_argument when r1 is not reachable from r0.
bool in_dominated_interior(const PoolSpec& spec, const Reserves& r0,
                           const Reserves& r1, double tol = kFeasibilityTol);

// Squared Euclidean distance from (Delta, Lambda) to the trading set, plus
// the d(0, T(R)) offset (zero: the empty trade is always feasible). For a
// fixed post-reserve point the nearest trade decomposes coordinatewise in
// closed form, leaving a convex minimization over the frontier psi = psi(R)
// solved by cyclic golden-section descent.
double monotone_phi(const PoolSpec& spec, const Trade& trade,
                    double proj_tol = 1e-8);

// Property suite for monotone_phi: coordinate monotonicity, zero-iff-feasible,
// convexity along random segments.
CheckReport check_monotone_phi(const PoolSpec& spec, int num_samples,
                               std::uint64_t rng_seed);

// Random strategy generator used by the path-deficiency check; exposed for
// reuse in tests. Each step adds a random input basket and takes the boundary
// output along a random direction.
StrategyTrace random_strategy(const PoolSpec& spec, const PriceVector& c,
                              int steps, std::uint64_t seed);

}  // namespace cfmm
