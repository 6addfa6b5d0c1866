// Arbitrageur-driven simulation of a pool against a stochastic reference
// market.
#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "cfmm/types.hpp"

namespace cfmm {

// Geometric Brownian motion for coins 1..n-1; the numeraire (coin 0) stays
// pinned at price 1.
struct GbmModel {
  double mu = 0.0;     // drift per unit time
  double sigma = 0.0;  // volatility per sqrt unit time
};

// Replays a fixed price path (one row per step, n prices each).
struct ReplayModel {
  std::vector<Vec> prices;
};

using PriceModel = std::variant<GbmModel, ReplayModel>;

struct SimConfig {
  PoolSpec pool;
  PriceModel model = GbmModel{};
  int steps = 1;
  double dt = 1.0;
  std::uint64_t seed = 0;
  double profit_threshold = 0.0;  // execute only trades strictly above this
};

struct SimStep {
  Vec prices;            // reference prices c_t
  Trade trade;           // executed trade (zero when no arbitrage)
  Vec reserves;          // post-trade reserves
  Vec reported;          // reported price, numeraire coin 0
  double reserve_value;  // p* at c_t, post trade
  double hold_value;     // c_t^T R^0
  double cum_profit;     // arbitrageur cumulative profit
};

struct SimTrace {
  int n = 0;
  std::vector<SimStep> steps;
};

struct TraceStats {
  double final_value = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  double total_profit = 0.0;
  double max_price_gap = 0.0;  // max relative |reported - reference|
  double trade_fraction = 0.0;
};

// Deterministic given the config (normal draws come from a fixed Box-Muller
// transform over mt19937_64, independent of the standard library's
// distribution implementations).
SimTrace simulate(const SimConfig& config);

TraceStats trace_stats(const SimTrace& trace);

}  // namespace cfmm
