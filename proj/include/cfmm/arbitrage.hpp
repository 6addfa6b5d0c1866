// Optimal arbitrage against an infinitely liquid reference market.
#pragma once

#include <optional>

#include "cfmm/types.hpp"

namespace cfmm {

enum class ArbStatus { ClosedForm, Numeric, NoTrade };

inline const char* to_string(ArbStatus s) {
  switch (s) {
    case ArbStatus::ClosedForm: return "closed_form";
    case ArbStatus::Numeric: return "numeric";
    case ArbStatus::NoTrade: return "no_trade";
  }
  return "?";
}

struct ArbitrageResult {
  Trade trade;
  Reserves post_reserves;
  double profit = 0.0;       // c^T (Lambda - Delta), numeraire units
  double dual_lambda = 0.0;  // scaling of the supporting hyperplane
  ArbStatus status = ArbStatus::NoTrade;
};

// Objective of the arbitrage problem: c^T Lambda - c^T Delta.
double profit(const PriceVector& c, const Trade& trade);

// Fee-less optimum (gamma must be 1). Mean pools solve in closed form,
// Curve pools by scalar root finding on the invariant level.
ArbitrageResult solve_arbitrage_feeless(const PoolSpec& spec,
                                        const PriceVector& c);

// General optimum. Delegates to the fee-less path for gamma = 1; for
// gamma < 1 enumerates net-input/net-output/untouched sign patterns and
// solves each pattern's stationarity system.
ArbitrageResult solve_arbitrage(const PoolSpec& spec, const PriceVector& c);

namespace detail {

// Solves the stationarity system on the frontier psi(x) = level:
//   grad_psi(x)_i = scale[i] / mu   for i in free_idx,
//   x_j = fixed[j]                  otherwise,
// for the multiplier mu > 0 making the level constraint hold. Returns the
// full point x, or nullopt when the pattern admits no solution.
std::optional<Vec> solve_frontier_stationary(const PoolSpec& spec, double level,
                                             const std::vector<int>& free_idx,
                                             const Vec& scale, const Vec& fixed,
                                             double* mu_out = nullptr);

}  // namespace detail

}  // namespace cfmm
