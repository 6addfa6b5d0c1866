#include "cfmm/arbitrage.hpp"

#include <algorithm>
#include <cmath>

#include "cfmm/pool.hpp"
#include "cfmm/rootfind.hpp"

namespace cfmm {

namespace detail {

namespace {

// Mean-like: stationarity gives x_i = w_i * level * mu / scale_i on the free
// coordinates; the level constraint pins mu in closed form.
std::optional<Vec> mean_stationary(const PoolSpec& spec, double level,
                                   const std::vector<int>& free_idx,
                                   const Vec& scale, const Vec& fixed,
                                   double* mu_out) {
  if (!(level > 0.0)) return std::nullopt;
  double w_free = 0.0;
  double log_b = 0.0;
  for (int i : free_idx) {
    double w = spec.weights[static_cast<std::size_t>(i)];
    if (!(w > 0.0)) return std::nullopt;  // zero-weight coin cannot sit on the frontier
    w_free += w;
    log_b += w * std::log(w * level / scale[static_cast<std::size_t>(i)]);
  }
  for (int j = 0; j < spec.n; ++j) {
    if (std::find(free_idx.begin(), free_idx.end(), j) != free_idx.end()) continue;
    log_b += spec.weights[static_cast<std::size_t>(j)] *
             std::log(fixed[static_cast<std::size_t>(j)]);
  }
  double mu = std::exp((std::log(level) - log_b) / w_free);
  if (!std::isfinite(mu) || !(mu > 0.0)) return std::nullopt;
  Vec x = fixed;
  for (int i : free_idx) {
    auto ui = static_cast<std::size_t>(i);
    x[ui] = spec.weights[ui] * level * mu / scale[ui];
    if (!(x[ui] > kReserveFloor)) return std::nullopt;
  }
  if (mu_out) *mu_out = mu;
  return x;
}

// Curve: given mu, the free coordinates follow x_i = beta / (P (q_i - alpha))
// with P = prod(x) eliminated analytically; psi(x(mu)) is increasing in mu, so
// the level constraint is a bracketed scalar root find.
std::optional<Vec> curve_stationary(const PoolSpec& spec, double level,
                                    const std::vector<int>& free_idx,
                                    const Vec& scale, const Vec& fixed,
                                    double* mu_out) {
  if (!(spec.beta > 0.0)) return std::nullopt;
  const double f = static_cast<double>(free_idx.size());

  double log_p_fixed = 0.0;
  for (int j = 0; j < spec.n; ++j) {
    if (std::find(free_idx.begin(), free_idx.end(), j) != free_idx.end()) continue;
    log_p_fixed += std::log(fixed[static_cast<std::size_t>(j)]);
  }

  auto log_total_prod = [&](double mu) -> double {
    double log_prod_d = 0.0;
    for (int i : free_idx) {
      double d = scale[static_cast<std::size_t>(i)] / mu - spec.alpha;
      log_prod_d += std::log(d);
    }
    return (f * std::log(spec.beta) + log_p_fixed - log_prod_d) / (1.0 + f);
  };

  auto point_at = [&](double mu) -> Vec {
    double log_p = log_total_prod(mu);
    Vec x = fixed;
    for (int i : free_idx) {
      auto ui = static_cast<std::size_t>(i);
      double d = scale[ui] / mu - spec.alpha;
      x[ui] = std::exp(std::log(spec.beta) - log_p - std::log(d));
    }
    return x;
  };

  double mu_max = kInfSentinel;
  if (spec.alpha > 0.0) {
    for (int i : free_idx)
      mu_max = std::min(mu_max, scale[static_cast<std::size_t>(i)] / spec.alpha);
  }

  double sum_fixed = 0.0;
  for (int j = 0; j < spec.n; ++j) {
    if (std::find(free_idx.begin(), free_idx.end(), j) != free_idx.end()) continue;
    sum_fixed += fixed[static_cast<std::size_t>(j)];
  }

  // psi(x(mu)) - level, computed from logs and clamped so bracketing probes
  // far outside the working range stay finite.
  auto h = [&](double mu) -> double {
    double log_p = log_total_prod(mu);
    double sum = sum_fixed;
    for (int i : free_idx) {
      auto ui = static_cast<std::size_t>(i);
      double d = scale[ui] / mu - spec.alpha;
      sum += std::exp(std::log(spec.beta) - log_p - std::log(d));
    }
    double psi = (spec.alpha > 0.0 ? spec.alpha * sum : 0.0) -
                 spec.beta * std::exp(-log_p);
    if (!std::isfinite(psi)) return psi > 0.0 ? kInfSentinel : -kInfSentinel;
    return std::clamp(psi - level, -kInfSentinel, kInfSentinel);
  };

  // Bracket: psi(x(mu)) -> -inf as mu -> 0 and grows past the level near the
  // domain edge (or as mu -> inf when alpha = 0).
  double hi = spec.alpha > 0.0 ? mu_max * (1.0 - 1e-12) : 1.0;
  if (spec.alpha == 0.0) {
    int guard = 0;
    while (h(hi) < 0.0) {
      hi *= 4.0;
      if (++guard > 600) return std::nullopt;
    }
  } else if (h(hi) < 0.0) {
    return std::nullopt;  // level unreachable inside the pattern's domain
  }
  double lo = hi;
  int guard = 0;
  do {
    lo *= 0.125;
    if (++guard > 600) return std::nullopt;
  } while (h(lo) > 0.0);

  // Bisect in log space; the bracket can span many orders of magnitude.
  double log_mu = bisect([&](double t) { return h(std::exp(t)); }, std::log(lo),
                         std::log(hi), 4e-16, 400);
  double mu = std::exp(log_mu);
  Vec x = point_at(mu);
  for (double xi : x)
    if (!(xi > kReserveFloor)) return std::nullopt;
  // Polish the level constraint to machine precision via Newton on the free
  // coordinate with the steepest gradient: downstream costs are first-order
  // sensitive to the level but only second-order to the stationary split.
  for (int it = 0; it < 3; ++it) {
    double err = eval_psi(spec, x) - level;
    if (err == 0.0) break;
    Vec gp = grad_psi(spec, x);
    std::size_t j = static_cast<std::size_t>(free_idx.front());
    for (int i : free_idx) {
      auto ui = static_cast<std::size_t>(i);
      if (gp[ui] > gp[j]) j = ui;
    }
    if (!(gp[j] > 0.0)) break;
    double xn = x[j] - err / gp[j];
    if (!(xn > kReserveFloor)) break;
    x[j] = xn;
  }
  if (mu_out) *mu_out = mu;
  return x;
}

}  // namespace

std::optional<Vec> solve_frontier_stationary(const PoolSpec& spec, double level,
                                             const std::vector<int>& free_idx,
                                             const Vec& scale, const Vec& fixed,
                                             double* mu_out) {
  if (free_idx.empty()) return std::nullopt;
  if (spec.is_mean_like())
    return mean_stationary(spec, level, free_idx, scale, fixed, mu_out);
  return curve_stationary(spec, level, free_idx, scale, fixed, mu_out);
}

}  // namespace detail

double profit(const PriceVector& c, const Trade& trade) {
  if (c.size() != trade.delta.size() || c.size() != trade.lambda.size())
    throw std::invalid_argument("profit: length mismatch");
  return dot(c.c, trade.lambda) - dot(c.c, trade.delta);
}

namespace {

ArbitrageResult no_trade_result(const PoolSpec& spec, double dual_lambda,
                                ArbStatus, std::size_t n) {
  ArbitrageResult res;
  res.trade = Trade::zero(n);
  res.post_reserves = spec.reserves;
  res.profit = 0.0;
  res.dual_lambda = dual_lambda;
  res.status = ArbStatus::NoTrade;
  return res;
}

// Trades below this fraction of the portfolio value are floating-point dust.
bool is_dust(double prof, const PoolSpec& spec, const PriceVector& c) {
  return prof <= 1e-14 * dot(c.c, spec.reserves.r);
}

ArbitrageResult result_from_point(const PoolSpec& spec, const PriceVector& c,
                                  const Vec& x, double mu, ArbStatus status) {
  auto n = static_cast<std::size_t>(spec.n);
  Trade trade = Trade::zero(n);
  Vec post(n);
  for (std::size_t i = 0; i < n; ++i) {
    double diff = x[i] - spec.reserves[i];
    if (diff > 0.0)
      trade.delta[i] = diff / spec.gamma;
    else
      trade.lambda[i] = -diff;
    post[i] = spec.reserves[i] + trade.delta[i] - trade.lambda[i];
  }
  double prof = profit(c, trade);
  if (is_dust(prof, spec, c)) return no_trade_result(spec, mu, status, n);
  ArbitrageResult res;
  res.trade = std::move(trade);
  res.post_reserves = Reserves(std::move(post));
  res.profit = prof;
  res.dual_lambda = mu;
  res.status = status;
  return res;
}

}  // namespace

ArbitrageResult solve_arbitrage_feeless(const PoolSpec& spec,
                                        const PriceVector& c) {
  spec.validate();
  c.validate();
  if (c.size() != static_cast<std::size_t>(spec.n))
    throw std::invalid_argument("solve_arbitrage_feeless: price length mismatch");
  if (spec.gamma != 1.0)
    throw std::invalid_argument("solve_arbitrage_feeless requires gamma = 1");

  std::vector<int> all(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) all[static_cast<std::size_t>(i)] = i;
  double mu = 0.0;
  auto x = detail::solve_frontier_stationary(spec, invariant_level(spec), all,
                                             c.c, spec.reserves.r, &mu);
  if (!x)
    throw NumericalError(
        "solve_arbitrage_feeless: no stationary point (degenerate pool "
        "parameters or prices)");
  ArbStatus status =
      spec.is_mean_like() ? ArbStatus::ClosedForm : ArbStatus::Numeric;
  return result_from_point(spec, c, *x, mu, status);
}

ArbitrageResult solve_arbitrage(const PoolSpec& spec, const PriceVector& c) {
  if (spec.gamma == 1.0) return solve_arbitrage_feeless(spec, c);
  spec.validate();
  c.validate();
  if (c.size() != static_cast<std::size_t>(spec.n))
    throw std::invalid_argument("solve_arbitrage: price length mismatch");

  const auto n = static_cast<std::size_t>(spec.n);
  const double level = invariant_level(spec);

  ArbitrageResult best = no_trade_result(spec, 0.0, ArbStatus::NoTrade, n);

  // Each coin is net-input (+1), net-output (-1), or untouched (0).
  std::vector<int> pattern(n, 0);
  long total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (long code = 1; code < total; ++code) {
    long rem = code;
    for (std::size_t i = 0; i < n; ++i) {
      pattern[i] = static_cast<int>(rem % 3) - 1;  // {-1, 0, +1}
      rem /= 3;
    }
    std::vector<int> free_idx;
    Vec scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (pattern[i] == 0) continue;
      free_idx.push_back(static_cast<int>(i));
      scale[i] = pattern[i] > 0 ? c[i] / spec.gamma : c[i];
    }
    double mu = 0.0;
    auto x = detail::solve_frontier_stationary(spec, level, free_idx, scale,
                                               spec.reserves.r, &mu);
    if (!x) continue;
    bool signs_ok = true;
    for (std::size_t i = 0; i < n && signs_ok; ++i) {
      if (pattern[i] > 0)
        signs_ok = (*x)[i] >= spec.reserves[i];
      else if (pattern[i] < 0)
        signs_ok = (*x)[i] <= spec.reserves[i];
    }
    if (!signs_ok) continue;
    ArbitrageResult res = result_from_point(spec, c, *x, mu, ArbStatus::Numeric);
    if (res.profit > best.profit) best = std::move(res);
  }
  return best;
}

}  // namespace cfmm
