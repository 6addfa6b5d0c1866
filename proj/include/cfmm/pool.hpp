// Trading-function evaluation, trade feasibility, and reachable-set tests.
#pragma once

#include "cfmm/types.hpp"

namespace cfmm {

// psi evaluated at an arbitrary strictly positive point.
// Mean/Product: prod r_i^{w_i}. Curve: alpha*sum(r) - beta/prod(r).
double eval_psi(const PoolSpec& spec, const Reserves& r);
double eval_psi(const PoolSpec& spec, const Vec& r);

// Invariant level at the pool's current reserves.
double invariant_level(const PoolSpec& spec);

// Fee-adjusted post-trade argument R + gamma*Delta - Lambda.
Vec post_trade_point(const PoolSpec& spec, const Trade& trade);

// psi(R + gamma*Delta - Lambda). Throws std::domain_error when the trade
// drains a coin.
double eval_phi(const PoolSpec& spec, const Trade& trade);

// True iff psi(R + gamma*Delta - Lambda) >= psi(R) - tol (relative) and the
// post-trade argument stays strictly positive. Domain violations return false.
bool trade_feasible(const PoolSpec& spec, const Trade& trade,
                    double tol = kFeasibilityTol);

// Reserves after executing a feasible trade: R + Delta - Lambda.
// Throws std::invalid_argument on infeasible trades.
Reserves apply_trade(const PoolSpec& spec, const Trade& trade,
                     double tol = kFeasibilityTol);

// Membership of r1 in the reachable reserve set from r0, via the minimal
// decomposition Delta = (r1-r0)_+, Lambda = (r0-r1)_+.
bool in_reachable_set(const PoolSpec& spec, const Reserves& r0,
                      const Reserves& r1, double tol = kFeasibilityTol);

// Gradient of psi at strictly positive reserves; all entries positive.
Vec grad_psi(const PoolSpec& spec, const Reserves& r);
Vec grad_psi(const PoolSpec& spec, const Vec& r);

}  // namespace cfmm
