#include <cmath>

#include "cfmm/arbitrage.hpp"
#include "cfmm/pool.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cfmm;
using testing::Rng;

TEST_CASE("feeless two-coin product arbitrage closed form") {
  // R = (4, 4), c = (1, 4): optimum moves to R' = (8, 2), profit
  // c^T R - c^T R' = 20 - 16 = 4.
  auto spec = PoolSpec::product({4.0, 4.0});
  auto res = solve_arbitrage_feeless(spec, PriceVector({1.0, 4.0}));
  CHECK(res.status == ArbStatus::ClosedForm);
  CHECK(res.post_reserves[0] == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(res.post_reserves[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.profit == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("feeless optimum satisfies stationarity and sits on the frontier") {
  Rng rng(101);
  for (int rep = 0; rep < 150; ++rep) {
    int n = rng.pick(2, 6);
    PoolSpec spec;
    switch (rng.pick(0, 2)) {
      case 0: spec = testing::random_product_pool(rng, n); break;
      case 1: spec = testing::random_mean_pool(rng, n); break;
      default: spec = testing::random_curve_pool(rng, n); break;
    }
    auto c = testing::random_prices(rng, n);
    auto res = solve_arbitrage_feeless(spec, c);
    double k = invariant_level(spec);
    double psi1 = eval_psi(spec, res.post_reserves);
    CHECK(std::abs(psi1 - k) <= 1e-9 * std::max(1.0, std::abs(k)));
    Vec g = grad_psi(spec, res.post_reserves);
    double cmax = 0.0, gap = 0.0;
    for (int i = 0; i < n; ++i) {
      cmax = std::max(cmax, std::abs(c[i]));
      gap = std::max(gap, std::abs(c[i] - res.dual_lambda * g[i]));
    }
    CHECK(gap <= 1e-8 * cmax);
    CHECK(res.profit >= -1e-12);
  }
}

TEST_CASE("arbitrage profit is invariant under price rescaling") {
  Rng rng(107);
  for (int rep = 0; rep < 60; ++rep) {
    int n = rng.pick(2, 4);
    auto spec = testing::random_mean_pool(rng, n, rng.uniform(0.9, 1.0));
    Vec c = rng.vec(n, 0.2, 5.0);
    double s = rng.uniform(0.5, 10.0);
    Vec cs = c;
    for (double& x : cs) x *= s;
    auto a = solve_arbitrage(spec, PriceVector(c));
    auto b = solve_arbitrage(spec, PriceVector(cs));
    CHECK(b.profit ==
          doctest::Approx(s * a.profit).epsilon(1e-8).scale(1.0 + s));
  }
}

TEST_CASE("no arbitrage at the reported price is a fixed point") {
  Rng rng(109);
  for (int rep = 0; rep < 100; ++rep) {
    int n = rng.pick(2, 5);
    auto spec = rng.pick(0, 1) ? testing::random_mean_pool(rng, n)
                               : testing::random_curve_pool(rng, n);
    Vec c = grad_psi(spec, spec.reserves);  // price the pool at its own slope
    auto res = solve_arbitrage_feeless(spec, PriceVector(c));
    double scale = dot(c, spec.reserves.r);
    CHECK(std::abs(res.profit) <= 1e-8 * scale);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(res.post_reserves[i] - spec.reserves[i]) <=
            1e-6 * spec.reserves[i]);
  }
}

TEST_CASE("fee solver matches worked two-coin numbers") {
  // R = (4, 4), c = (1, 4), gamma = 0.997: inputs on coin 0 solve
  // grad_psi = c/(gamma*mu), outputs c/mu; the gradient ratio fixes
  // x0/x1 = 4*gamma on the frontier x0*x1 = 16, so the fee point is
  // x = (8*sqrt(gamma), 2/sqrt(gamma)).
  double g = 0.997;
  auto spec = PoolSpec::product({4.0, 4.0}, g);
  auto res = solve_arbitrage(spec, PriceVector({1.0, 4.0}));
  double x0 = 8.0 * std::sqrt(g);
  double x1 = 2.0 / std::sqrt(g);
  CHECK(res.trade.delta[0] == doctest::Approx((x0 - 4.0) / g).epsilon(1e-10));
  CHECK(res.trade.lambda[1] == doctest::Approx(4.0 - x1).epsilon(1e-10));
  double profit = 4.0 * (4.0 - x1) - (x0 - 4.0) / g;
  CHECK(res.profit == doctest::Approx(profit).epsilon(1e-10));
}

TEST_CASE("fee solver profit is feasible, nonnegative, and gamma-monotone") {
  Rng rng(113);
  for (int rep = 0; rep < 80; ++rep) {
    int n = rng.pick(2, 4);
    PoolSpec spec;
    switch (rng.pick(0, 2)) {
      case 0: spec = testing::random_product_pool(rng, n); break;
      case 1: spec = testing::random_mean_pool(rng, n); break;
      default: spec = testing::random_curve_pool(rng, n); break;
    }
    auto c = testing::random_prices(rng, n);
    spec.gamma = 0.99;
    auto fee = solve_arbitrage(spec, c);
    CHECK(fee.profit >= -1e-12);
    if (fee.status != ArbStatus::NoTrade)
      CHECK(trade_feasible(spec, fee.trade, 1e-7));
    auto free = solve_arbitrage(spec.feeless(), c);
    CHECK(fee.profit <= free.profit + 1e-8 * (1.0 + std::abs(free.profit)));
  }
}

TEST_CASE("no-trade region widens with the fee") {
  // At the reported price a feeless pool is indifferent; with a fee the
  // solver must return exactly no trade.
  Rng rng(127);
  for (int rep = 0; rep < 50; ++rep) {
    int n = rng.pick(2, 4);
    auto spec = testing::random_mean_pool(rng, n, 0.95);
    Vec c = grad_psi(spec, spec.reserves);
    // Nudge prices inside the fee band.
    for (double& x : c) x *= rng.uniform(0.99, 1.01);
    auto res = solve_arbitrage(spec, PriceVector(c));
    CHECK(res.status == ArbStatus::NoTrade);
    CHECK(res.trade.is_zero());
  }
}

TEST_CASE("solver rejects invalid inputs") {
  auto spec = PoolSpec::product({4.0, 4.0});
  CHECK_THROWS_AS(solve_arbitrage(spec, PriceVector({1.0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_arbitrage(spec, PriceVector({1.0, -1.0})),
                  std::invalid_argument);
  spec.gamma = 0.9;
  CHECK_THROWS_AS(solve_arbitrage_feeless(spec, PriceVector({1.0, 2.0})),
                  std::invalid_argument);
}
