#include "cfmm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cfmm/arbitrage.hpp"
#include "cfmm/pool.hpp"
#include "cfmm/pricing.hpp"
#include "cfmm/value.hpp"

namespace cfmm {

namespace {

// Box-Muller over mt19937_64. std::normal_distribution's sequence is
// implementation-defined; this keeps traces reproducible across toolchains.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = ((eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    double u2 = (eng_() >> 11) * 0x1.0p-53;          // [0, 1)
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

SimTrace simulate(const SimConfig& config) {
  config.pool.validate();
  if (config.steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
  if (config.dt <= 0.0) throw std::invalid_argument("simulate: dt must be > 0");
  if (config.profit_threshold < 0.0)
    throw std::invalid_argument("simulate: threshold must be >= 0");

  const auto n = static_cast<std::size_t>(config.pool.n);
  const bool replay = std::holds_alternative<ReplayModel>(config.model);
  if (replay) {
    const auto& rp = std::get<ReplayModel>(config.model);
    if (static_cast<int>(rp.prices.size()) < config.steps)
      throw std::invalid_argument("simulate: replay path shorter than steps");
    for (const Vec& row : rp.prices)
      if (row.size() != n)
        throw std::invalid_argument("simulate: replay row width != coin count");
  } else {
    const auto& gbm = std::get<GbmModel>(config.model);
    if (gbm.sigma < 0.0) throw std::invalid_argument("simulate: sigma must be >= 0");
  }

  NormalSampler normal(config.seed);
  SimTrace trace;
  trace.n = config.pool.n;
  trace.steps.reserve(static_cast<std::size_t>(config.steps));

  PoolSpec pool = config.pool;
  const Vec r0 = pool.reserves.r;
  Vec c(n, 1.0);
  double cum_profit = 0.0;

  for (int t = 0; t < config.steps; ++t) {
    if (replay) {
      c = std::get<ReplayModel>(config.model).prices[static_cast<std::size_t>(t)];
    } else {
      const auto& gbm = std::get<GbmModel>(config.model);
      double drift = (gbm.mu - 0.5 * gbm.sigma * gbm.sigma) * config.dt;
      double vol = gbm.sigma * std::sqrt(config.dt);
      for (std::size_t i = 1; i < n; ++i)
        c[i] *= std::exp(drift + vol * normal());
      c[0] = 1.0;
    }
    PriceVector prices(c);

    ArbitrageResult arb;
    try {
      arb = solve_arbitrage(pool, prices);
    } catch (const std::exception& e) {
      throw NumericalError("simulate: solver failed at step " + std::to_string(t) +
                           ": " + e.what());
    }

    SimStep step;
    step.prices = c;
    if (arb.status != ArbStatus::NoTrade &&
        arb.profit > config.profit_threshold) {
      pool.reserves = arb.post_reserves;
      cum_profit += arb.profit;
      step.trade = arb.trade;
      // Fee pools ratchet the invariant level; reserves carry it implicitly.
    } else {
      step.trade = Trade::zero(n);
    }
    step.reserves = pool.reserves.r;
    step.reported = reported_price(pool, pool.reserves, 0).normalized;
    step.reserve_value = reserve_value(pool, prices).value;
    step.hold_value = dot(c, r0);
    step.cum_profit = cum_profit;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

TraceStats trace_stats(const SimTrace& trace) {
  if (trace.steps.empty())
    throw std::invalid_argument("trace_stats: empty trace");
  TraceStats st;
  st.min_value = kInfSentinel;
  st.max_value = -kInfSentinel;
  int traded = 0;
  for (const SimStep& s : trace.steps) {
    st.min_value = std::min(st.min_value, s.reserve_value);
    st.max_value = std::max(st.max_value, s.reserve_value);
    if (!s.trade.is_zero()) ++traded;
    for (std::size_t i = 0; i < s.prices.size(); ++i) {
      double gap = std::abs(s.reported[i] - s.prices[i]) / s.prices[i];
      st.max_price_gap = std::max(st.max_price_gap, gap);
    }
  }
  st.final_value = trace.steps.back().reserve_value;
  st.total_profit = trace.steps.back().cum_profit;
  st.trade_fraction =
      static_cast<double>(traded) / static_cast<double>(trace.steps.size());
  return st;
}

}  // namespace cfmm
