#include "cfmm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cfmm/pool.hpp"
#include "cfmm/rootfind.hpp"

namespace cfmm {

namespace {

// Feasibility level test for a candidate post-reserve point, fee-adjusted.
double fee_point_psi(const PoolSpec& spec, const Vec& post) {
  Vec z(post.size());
  for (std::size_t i = 0; i < post.size(); ++i) {
    double diff = post[i] - spec.reserves[i];
    z[i] = diff > 0.0 ? spec.reserves[i] + spec.gamma * diff : post[i];
  }
  for (double zi : z)
    if (!(zi > kReserveFloor)) return -kInfSentinel;
  return eval_psi(spec, z);
}

struct GridBest {
  Vec post;
  double profit = -kInfSentinel;
};

// For fixed leading coordinates, the profit-optimal last coordinate sits on
// the frontier; locate it by bisection (the fee-adjusted psi is increasing in
// each coordinate).
bool frontier_last_coord(const PoolSpec& spec, double level, Vec& post,
                         double lo, double hi) {
  const std::size_t last = post.size() - 1;
  auto m = [&](double t) {
    post[last] = t;
    return fee_point_psi(spec, post) - level;
  };
  double mhi = m(hi);
  if (mhi < 0.0) return false;
  double mlo = m(lo);
  if (mlo >= 0.0) {
    post[last] = lo;
    return true;
  }
  post[last] = bisect(m, lo, hi, 1e-13);
  if (fee_point_psi(spec, post) < level) {
    // Nudge back onto the feasible side of the frontier.
    post[last] = std::min(hi, post[last] * (1.0 + 1e-12) + 1e-300);
  }
  return true;
}

void grid_scan(const PoolSpec& spec, const PriceVector& c, double level,
               const Vec& lo, const Vec& hi, int pts_per_dim, GridBest& best) {
  const auto n = static_cast<std::size_t>(spec.n);
  const std::size_t dims = n - 1;
  std::vector<int> idx(dims, 0);
  Vec post(n);
  const double last_lo = lo[n - 1];
  const double last_hi = hi[n - 1];
  while (true) {
    for (std::size_t d = 0; d < dims; ++d) {
      double frac = pts_per_dim > 1
                        ? static_cast<double>(idx[d]) / (pts_per_dim - 1)
                        : 0.0;
      post[d] = lo[d] + frac * (hi[d] - lo[d]);
    }
    if (frontier_last_coord(spec, level, post, last_lo, last_hi)) {
      double prof = dot(c.c, spec.reserves.r) - dot(c.c, post);
      if (prof > best.profit) {
        best.profit = prof;
        best.post = post;
      }
    }
    std::size_t d = 0;
    while (d < dims && ++idx[d] == pts_per_dim) idx[d++] = 0;
    if (d == dims) break;
  }
}

}  // namespace

ArbitrageResult brute_force_arbitrage(const PoolSpec& spec,
                                      const PriceVector& c, double grid_pitch) {
  spec.validate();
  c.validate();
  if (spec.n > 3)
    throw std::invalid_argument("brute_force_arbitrage: refused for n > 3");
  if (!(grid_pitch > 0.0))
    throw std::invalid_argument("brute_force_arbitrage: pitch must be > 0");

  const auto n = static_cast<std::size_t>(spec.n);
  const double level = invariant_level(spec);
  const int pts = 121;

  // Curve optima can push a reserve several orders of magnitude below its
  // starting point, so the window is wide and asymmetric.
  Vec lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = spec.reserves[i] / 4096.0;
    hi[i] = spec.reserves[i] * 256.0;
  }

  GridBest best;
  best.post = spec.reserves.r;
  best.profit = 0.0;

  Vec cur_lo = lo, cur_hi = hi;
  for (int pass = 0; pass < 200; ++pass) {
    double pitch = 0.0;
    for (std::size_t d = 0; d + 1 < n; ++d)
      pitch = std::max(pitch, (cur_hi[d] - cur_lo[d]) / (pts - 1));
    grid_scan(spec, c, level, cur_lo, cur_hi, pts, best);
    if (pitch <= grid_pitch) break;
    // Zoom in around the incumbent; when the incumbent sits at any window
    // edge (a flat ridge running out of the window), recenter every
    // dimension at the current scale instead of shrinking, so the search
    // can walk along the ridge without collapsing the window around it.
    bool at_edge = false;
    for (std::size_t d = 0; d + 1 < n; ++d) {
      double step = (cur_hi[d] - cur_lo[d]) / (pts - 1);
      double center = best.post[d];
      at_edge = at_edge || center - cur_lo[d] < 2.0 * step ||
                cur_hi[d] - center < 2.0 * step;
    }
    for (std::size_t d = 0; d + 1 < n; ++d) {
      double step = (cur_hi[d] - cur_lo[d]) / (pts - 1);
      double center = best.post[d];
      double half = at_edge ? (cur_hi[d] - cur_lo[d]) / 2.0 : 8.0 * step;
      cur_lo[d] = std::max(lo[d], center - half);
      cur_hi[d] = std::min(hi[d], center + half);
    }
  }

  ArbitrageResult res;
  res.status = ArbStatus::Numeric;
  res.post_reserves = Reserves(best.post);
  res.trade = Trade::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    double diff = best.post[i] - spec.reserves[i];
    if (diff > 0.0)
      res.trade.delta[i] = diff;  // post-space grid: delta enters reserves in full
    else
      res.trade.lambda[i] = -diff;
  }
  res.profit = std::max(0.0, best.profit);
  res.dual_lambda = 0.0;
  return res;
}

StrategyTrace random_strategy(const PoolSpec& spec, const PriceVector& c,
                              int steps, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<std::size_t>(spec.n);

  StrategyTrace trace;
  PoolSpec cur = spec;
  for (int s = 0; s < steps; ++s) {
    const double level = invariant_level(cur);
    // Random input basket, bounded away from zero so fee losses are visible.
    Vec delta(n, 0.0);
    bool any_input = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (unit(eng) < 0.6) {
        delta[i] = (0.01 + 0.3 * unit(eng)) * cur.reserves[i];
        any_input = true;
      }
    }
    if (!any_input) {
      std::size_t i = static_cast<std::size_t>(unit(eng) * n) % n;
      delta[i] = (0.01 + 0.3 * unit(eng)) * cur.reserves[i];
    }
    // Boundary output along a random direction.
    Vec dir(n, 0.0);
    double dir_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dir[i] = delta[i] > 0.0 ? 0.0 : unit(eng);
      dir_norm += dir[i];
    }
    if (dir_norm == 0.0) {
      std::size_t i = static_cast<std::size_t>(unit(eng) * n) % n;
      dir[i] = 1.0;
    }
    double s_max = kInfSentinel;
    for (std::size_t i = 0; i < n; ++i) {
      double avail = cur.reserves[i] + cur.gamma * delta[i];
      if (dir[i] > 0.0) s_max = std::min(s_max, avail / dir[i]);
    }
    auto m = [&](double t) {
      Vec z(n);
      for (std::size_t i = 0; i < n; ++i)
        z[i] = std::max(kReserveFloor * 2.0,
                        cur.reserves[i] + cur.gamma * delta[i] - t * dir[i]);
      return eval_psi(cur, z) - level;
    };
    double scale = 0.0;
    if (m(0.0) > 0.0 && m(s_max * (1.0 - 1e-9)) < 0.0)
      scale = bisect(m, 0.0, s_max * (1.0 - 1e-9), 1e-13) * (1.0 - 1e-12);
    Vec lambda(n);
    for (std::size_t i = 0; i < n; ++i) lambda[i] = scale * dir[i];
    Trade trade(delta, lambda);
    if (!trade_feasible(cur, trade)) {
      trade = Trade(delta, Vec(n, 0.0));  // keep the step valid; pure deposit
    }
    Reserves next = apply_trade(cur, trade);
    bool nonzero_input = false;
    for (double d : trade.delta)
      if (d > 0.0) nonzero_input = true;
    if (nonzero_input) ++trace.nonzero_input_steps;
    trace.steps.push_back({trade, next});
    cur = cur.with_reserves(next);
  }
  trace.cumulative_profit =
      dot(c.c, spec.reserves.r) - dot(c.c, cur.reserves.r);
  return trace;
}

CheckReport check_path_deficiency(const PoolSpec& spec, const PriceVector& c,
                                  int num_strategies, int max_steps,
                                  std::uint64_t rng_seed) {
  spec.validate();
  c.validate();
  CheckReport report;
  report.check = "path_deficiency";
  report.samples = num_strategies;
  report.seed = rng_seed;

  const double single_shot = solve_arbitrage(spec, c).profit;
  std::mt19937_64 eng(rng_seed);

  for (int s = 0; s < num_strategies; ++s) {
    std::uint64_t strategy_seed = eng();
    int steps = 2 + static_cast<int>(strategy_seed % 1000) %
                        std::max(1, max_steps - 1);
    StrategyTrace trace = random_strategy(spec, c, steps, strategy_seed);

    // (a) multi-step dominance
    if (trace.cumulative_profit > single_shot + 1e-9) {
      CheckFailure f;
      f.seed = strategy_seed;
      f.inputs = "cumulative profit of " + std::to_string(steps) + "-step strategy";
      f.observed = trace.cumulative_profit;
      f.bound = single_shot + 1e-9;
      report.failures.push_back(f);
    }
    // (b) the end state and points reachable from it stay inside S(R^0).
    // S is taken in the level-set (fee-less) form: with fees the reserve
    // level only ratchets upward, which is the inclusion the shrinking
    // reachable sets express.
    const PoolSpec relaxed = spec.feeless();
    const Reserves& end = trace.steps.back().reserves;
    bool member = in_reachable_set(relaxed, spec.reserves, end, 1e-7);
    for (int probe = 0; member && probe < 3; ++probe) {
      StrategyTrace onward = random_strategy(relaxed.with_reserves(end), c, 1,
                                             strategy_seed ^ (0xA5A5u + probe));
      member = in_reachable_set(relaxed, spec.reserves,
                                onward.steps.back().reserves, 1e-7);
    }
    if (!member) {
      CheckFailure f;
      f.seed = strategy_seed;
      f.inputs = "sampled point of S(R^m) not in S(R^0)";
      f.observed = eval_psi(spec, end);
      f.bound = invariant_level(spec);
      report.failures.push_back(f);
    }
    // (c) strictness for fee pools
    if (spec.gamma < 1.0 && trace.nonzero_input_steps >= 2) {
      double gap = single_shot - trace.cumulative_profit;
      if (!(gap > 1e-9)) {
        CheckFailure f;
        f.seed = strategy_seed;
        f.inputs = "strict dominance margin";
        f.observed = gap;
        f.bound = 1e-9;
        report.failures.push_back(f);
      }
    }
  }
  return report;
}

bool in_dominated_interior(const PoolSpec& spec, const Reserves& r0,
                           const Reserves& r1, double tol) {
  double psi0 = eval_psi(spec, r0);
  double psi1 = eval_psi(spec, r1);
  double band = tol * std::max(1.0, std::abs(psi0));
  if (psi1 < psi0 - band)
    throw std::invalid_argument("in_dominated_interior: r1 is not reachable from r0");
  return psi1 > psi0 + band;
}

namespace {

// min (d - a)^2 + (l - b)^2 over d, l >= 0 with gamma*d - l = v: the
// per-coordinate piece of the squared distance to the trading set once the
// pool point R + gamma*Delta - Lambda is fixed. Closed form: the interior
// stationary point, or one of the two axis cases.
double coord_dist2(double v, double a, double b, double gamma) {
  double best = kInfSentinel;
  double d = (a + gamma * (v + b)) / (1.0 + gamma * gamma);
  double l = gamma * d - v;
  if (d >= 0.0 && l >= 0.0) best = (d - a) * (d - a) + (l - b) * (l - b);
  if (v <= 0.0) best = std::min(best, a * a + (v + b) * (v + b));  // d = 0
  if (v >= 0.0) {                                                  // l = 0
    double dv = v / gamma;
    best = std::min(best, (dv - a) * (dv - a) + b * b);
  }
  return best;
}

// Solves psi(x) = level for x[j] with the other coordinates held fixed; psi
// is increasing in each coordinate, so the root is bracketed by expansion.
double frontier_coord(const PoolSpec& spec, Vec x, std::size_t j, double level) {
  if (spec.is_mean_like()) {
    double s = std::log(level);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (i != j) s -= spec.weights[i] * std::log(x[i]);
    return std::exp(s / spec.weights[j]);
  }
  auto f = [&](double t) {
    x[j] = t;
    return eval_psi(spec, x) - level;
  };
  double hi = 1.0;
  int guard = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 200)
      throw NumericalError("monotone_phi: frontier coordinate out of range");
  }
  double lo = hi;
  guard = 0;
  while (f(lo) > 0.0) {
    lo *= 0.5;
    if (++guard > 400)
      throw NumericalError("monotone_phi: frontier coordinate out of range");
  }
  return bisect(f, lo, hi, 1e-14, 400);
}

}  // namespace

double monotone_phi(const PoolSpec& spec, const Trade& trade, double proj_tol) {
  const auto n = static_cast<std::size_t>(spec.n);
  if (trade.delta.size() != n || trade.lambda.size() != n)
    throw std::invalid_argument("monotone_phi: length mismatch");
  if (!trade.nonnegative())
    throw std::invalid_argument("monotone_phi: trade must be nonnegative");

  if (trade_feasible(spec, trade, 0.0)) return 0.0;

  // Squared distance from (Delta, Lambda) to the trading set. For a fixed
  // pool point x = R + gamma*Delta' - Lambda' the nearest trade decomposes
  // coordinatewise (coord_dist2), leaving a smooth convex objective over the
  // convex region psi(x) >= psi(R). The base trade is infeasible, so the
  // minimizer sits on the frontier psi(x) = psi(R); minimize there by cyclic
  // golden-section descent in log coordinates, the last coordinate dependent
  // through the level constraint.
  const double level = invariant_level(spec);
  auto objective = [&](const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += coord_dist2(x[i] - spec.reserves[i], trade.delta[i],
                       trade.lambda[i], spec.gamma);
    return s;
  };

  Vec x = spec.reserves.r;  // on the frontier by construction
  double best = objective(x);
  const int max_sweeps = 200;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = best;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double span = sweep == 0 ? 14.0 : 2.0;
      double t = golden_min(
          [&](double u) {
            Vec y = x;
            y[i] = std::exp(u);
            y[n - 1] = frontier_coord(spec, y, n - 1, level);
            return objective(y);
          },
          std::log(x[i]) - span, std::log(x[i]) + span, 1e-13, 600);
      x[i] = std::exp(t);
      x[n - 1] = frontier_coord(spec, x, n - 1, level);
    }
    best = objective(x);
    const double stop = std::max(proj_tol * proj_tol, 1e-12);
    if (sweep > 1 && std::abs(before - best) <= stop * std::max(1.0, best))
      return best;
  }
  throw NumericalError("monotone_phi: frontier descent did not converge");
}

CheckReport check_monotone_phi(const PoolSpec& spec, int num_samples,
                               std::uint64_t rng_seed) {
  spec.validate();
  CheckReport report;
  report.check = "monotone_phi";
  report.samples = num_samples;
  report.seed = rng_seed;

  std::mt19937_64 eng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<std::size_t>(spec.n);
  const double tol = 1e-6;

  auto random_trade = [&]() {
    Trade t = Trade::zero(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (unit(eng) < 0.5) t.delta[i] = unit(eng) * spec.reserves[i];
      if (unit(eng) < 0.5) t.lambda[i] = 0.9 * unit(eng) * spec.reserves[i];
    }
    return t;
  };

  for (int s = 0; s < num_samples; ++s) {
    std::uint64_t sample_seed = eng();
    Trade t = random_trade();
    double phi0 = monotone_phi(spec, t);

    // (a) nonincreasing in the input
    std::size_t i = static_cast<std::size_t>(unit(eng) * n) % n;
    Trade t_more_in = t;
    t_more_in.delta[i] += (0.1 + unit(eng)) * spec.reserves[i];
    double phi_in = monotone_phi(spec, t_more_in);
    if (phi_in > phi0 + tol) {
      report.failures.push_back(
          {sample_seed, "phi' increased when input grew", phi_in, phi0 + tol});
    }
    // (b) nondecreasing in the output
    Trade t_more_out = t;
    t_more_out.lambda[i] += (0.1 + unit(eng)) * spec.reserves[i];
    double phi_out = monotone_phi(spec, t_more_out);
    if (phi_out < phi0 - tol) {
      report.failures.push_back(
          {sample_seed, "phi' decreased when output grew", phi_out, phi0 - tol});
    }
    // (c) zero iff feasible (skip samples whose distance to the frontier is
    // within two orders of magnitude of the tolerance)
    bool feasible = trade_feasible(spec, t, 0.0);
    bool near_frontier = false;
    {
      Vec x = post_trade_point(spec, t);
      bool pos = true;
      for (double xi : x) pos = pos && xi > kReserveFloor;
      if (pos) {
        double k = invariant_level(spec);
        Vec gp = grad_psi(spec, x);
        double gnorm = std::sqrt(dot(gp, gp) * (1.0 + spec.gamma * spec.gamma));
        double dist_est = std::abs(eval_psi(spec, x) - k) / std::max(gnorm, 1e-12);
        near_frontier = dist_est * dist_est < 1e4 * tol;
      }
    }
    if (!near_frontier) {
      if (feasible && phi0 > tol)
        report.failures.push_back(
            {sample_seed, "feasible trade with phi' > 0", phi0, tol});
      if (!feasible && phi0 <= tol)
        report.failures.push_back(
            {sample_seed, "infeasible trade with phi' ~ 0", phi0, tol});
    }
    // (d) convexity along a random segment
    Trade t2 = random_trade();
    Trade mid = Trade::zero(n);
    for (std::size_t j = 0; j < n; ++j) {
      mid.delta[j] = 0.5 * (t.delta[j] + t2.delta[j]);
      mid.lambda[j] = 0.5 * (t.lambda[j] + t2.lambda[j]);
    }
    double phi2 = monotone_phi(spec, t2);
    double phim = monotone_phi(spec, mid);
    if (phim > 0.5 * (phi0 + phi2) + 1e-6) {
      report.failures.push_back({sample_seed, "convexity violated at midpoint",
                                 phim, 0.5 * (phi0 + phi2) + 1e-6});
    }
  }
  return report;
}

}  // namespace cfmm
