// Acceptance suite: ten numbered criteria, each printing one PASS/FAIL line.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "cfmm/arbitrage.hpp"
#include "cfmm/pool.hpp"
#include "cfmm/pricing.hpp"
#include "cfmm/simulate.hpp"
#include "cfmm/value.hpp"
#include "cfmm/verify.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cfmm;
using testing::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int num, const char* name, bool ok) {
  std::printf("[criterion %2d] %s: %s\n", num, ok ? "PASS" : "FAIL", name);
  std::fflush(stdout);
  CHECK_MESSAGE(ok, name);
}

}  // namespace

TEST_CASE("1: two-coin constant-product value closed form") {
  auto t0 = Clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    auto spec = testing::random_product_pool(rng, 2);
    double k = std::sqrt(spec.reserves[0] * spec.reserves[1]);
    double c2 = rng.uniform(0.1, 10.0);
    double oracle = testing::primal_value_oracle(spec, PriceVector({1.0, c2}));
    double closed = 2.0 * k * std::sqrt(c2);
    worst = std::max(worst, std::abs(oracle - closed) / closed);
  }
  double dt = seconds_since(t0);
  std::printf("    max relative error %.3e, %.2fs\n", worst, dt);
  report(1, "numeric primal matches 2k*sqrt(c2) (1e-8 rel, <1s)",
         worst <= 1e-8 && dt < 1.0);
}

TEST_CASE("2: constant-mean value formulas vs primal oracle") {
  Rng rng(1002);
  double worst_uniform = 0.0;
  for (int n : {2, 3, 4}) {
    for (int rep = 0; rep < 34; ++rep) {
      auto spec = testing::random_product_pool(rng, n);
      auto c = testing::random_prices(rng, n);
      double k = invariant_level(spec);
      double prod = 1.0;
      for (int i = 0; i < n; ++i) prod *= std::pow(c[i], 1.0 / n);
      double closed = n * k * prod;
      double oracle = testing::primal_value_oracle(spec, c);
      worst_uniform = std::max(worst_uniform, std::abs(oracle - closed) / closed);
    }
  }
  double worst_general = 0.0, worst_naive = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    int n = rng.pick(2, 4);
    auto spec = testing::random_mean_pool(rng, n);
    auto c = testing::random_prices(rng, n);
    double k = invariant_level(spec);
    double general = k, naive = k * n;
    for (int i = 0; i < n; ++i) {
      general *= std::pow(c[i] / spec.weights[i], spec.weights[i]);
      naive *= std::pow(c[i], spec.weights[i]);
    }
    double oracle = testing::primal_value_oracle(spec, c);
    worst_general = std::max(worst_general, std::abs(oracle - general) / general);
    worst_naive = std::max(worst_naive, std::abs(oracle - naive) / naive);
  }
  std::printf(
      "    uniform max err %.3e; general-weight k*prod((c_i/w_i)^w_i) max err "
      "%.3e\n"
      "    note: the plain n*k*prod(c_i^w_i) expression only holds for uniform "
      "weights; against the oracle it deviates by up to %.3e on general "
      "weights\n",
      worst_uniform, worst_general, worst_naive);
  report(2, "mean reserve value closed forms (1e-6 rel)",
         worst_uniform <= 1e-6 && worst_general <= 1e-6);
}

TEST_CASE("3: curve strong duality and lower bound") {
  Rng rng(1003);
  double worst_gap = 0.0;
  bool bound_ok = true;
  for (int rep = 0; rep < 200; ++rep) {
    int n = rng.pick(2, 3);
    auto spec = testing::random_curve_pool(rng, n);
    auto c = testing::random_prices(rng, n);
    auto res = reserve_value(spec, c);
    worst_gap = std::max(worst_gap, res.duality_gap);
    bound_ok = bound_ok &&
               curve_value_lower_bound(spec, c) <= res.value * (1.0 + 1e-9);
  }
  std::printf("    max duality gap %.3e\n", worst_gap);
  report(3, "dual max equals primal min (1e-8); (k/alpha)*min c lower bound",
         worst_gap <= 1e-8 && bound_ok);
}

TEST_CASE("4: reciprocal-product conjugate vs grid supremum") {
  Rng rng(1004);
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    for (int rep = 0; rep < 50; ++rep) {
      Vec y = rng.vec(n, -4.0, -0.3);
      auto recip = [](const Vec& x) {
        double p = 1.0;
        for (double v : x) p *= v;
        return 1.0 / p;
      };
      double sup = testing::grid_sup(y, recip, 50.0, 1e-5);
      double formula = conjugate_reciprocal_product(y);
      worst = std::max(worst,
                       std::abs(sup - formula) / std::max(1.0, std::abs(formula)));
    }
  }
  // Divergence branch: a positive component makes y^T x - f(x) unbounded.
  Vec y = {2.0, -1.0};
  bool diverges = conjugate_reciprocal_product(y) == kInfSentinel;
  for (double t : {1e2, 1e4, 1e6}) {
    double v = y[0] * t + y[1] * 1.0 - 1.0 / (t * 1.0);
    diverges = diverges && v > t;  // grows without bound along x = (t, 1)
  }
  std::printf("    max relative error %.3e\n", worst);
  report(4, "conjugate formula matches grid sup (1e-4); +inf branch diverges",
         worst <= 1e-4 && diverges);
}

TEST_CASE("5: marginal price converges to the reported price") {
  Rng rng(1005);
  bool ok = true;
  double worst_final = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    int n = rng.pick(2, 3);
    auto spec = rep % 2 == 0 ? testing::random_mean_pool(rng, n)
                             : testing::random_curve_pool(rng, n);
    Vec c = grad_psi(spec, spec.reserves);
    Vec dir(n, 0.0);
    dir[rng.pick(0, n - 1)] = 1.0;
    double ref = dot(c, dir);
    double prev = -1.0;
    for (double eps : {1e-4, 1e-5, 1e-6}) {
      double est =
          marginal_price_estimate(spec, spec.reserves, PriceVector(c), dir, eps);
      double err = std::abs(est - ref) / ref;
      // First-order decay down to the round-off floor of the inner solves;
      // the cost carries a fixed absolute error, so the floor scales as 1/eps.
      if (prev >= 0.0) ok = ok && err <= std::max(0.5 * prev, 2e-10 / eps);
      prev = err;
    }
    worst_final = std::max(worst_final, prev);
  }
  std::printf("    max final relative error %.3e\n", worst_final);
  report(5, "finite-difference price, first-order decay, final <= 1e-3",
         ok && worst_final <= 1e-3);
}

TEST_CASE("6: path deficiency and strict multi-step dominance") {
  auto t0 = Clock::now();
  Rng rng(1006);
  bool ok = true;
  for (int kind = 0; kind < 3; ++kind) {
    PoolSpec spec;
    switch (kind) {
      case 0: spec = testing::random_product_pool(rng, 2, 0.997); break;
      case 1: spec = testing::random_mean_pool(rng, 3, 0.997); break;
      default: spec = testing::random_curve_pool(rng, 2, 0.997); break;
    }
    auto c = testing::random_prices(rng, spec.n);
    auto rep = check_path_deficiency(spec, c, 1000, 5, 4242 + kind);
    ok = ok && rep.passed();
    if (!rep.passed())
      std::printf("    kind %d: %zu failures, first: %s\n", kind,
                  rep.failures.size(), rep.failures.front().inputs.c_str());
  }
  double dt = seconds_since(t0);
  std::printf("    %.2fs for 3000 strategies\n", dt);
  report(6, "no multi-step strategy beats single shot; strict for >=2 inputs",
         ok && dt < 30.0);
}

TEST_CASE("7: reserve-value ratchet along simulated trajectories") {
  Rng rng(1007);
  bool ok = true;
  double worst_drop = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimConfig cfg;
    switch (seed % 3) {
      case 0: cfg.pool = testing::random_product_pool(rng, 2, 0.997); break;
      case 1: cfg.pool = testing::random_mean_pool(rng, 2, 0.997); break;
      default: cfg.pool = testing::random_curve_pool(rng, 2, 0.997); break;
    }
    cfg.model = GbmModel{0.0, 0.4};
    cfg.steps = 1000;
    cfg.dt = 1.0 / 365.0;
    cfg.seed = seed;
    auto trace = simulate(cfg);
    Vec prev = cfg.pool.reserves.r;
    for (const auto& s : trace.steps) {
      PriceVector c(s.prices);
      double before =
          reserve_value(cfg.pool.with_reserves(Reserves(prev)), c).value;
      double after =
          reserve_value(cfg.pool.with_reserves(Reserves(s.reserves)), c).value;
      worst_drop = std::min(worst_drop, after - before);
      ok = ok && after - before >= -1e-9 * std::max(1.0, before);
      prev = s.reserves;
    }
  }
  std::printf("    worst per-step value change %.3e\n", worst_drop);
  report(7, "per-step reserve value change >= -1e-9 (10 seeds x 1000 steps)", ok);
}

TEST_CASE("8: solver vs brute-force grid oracle") {
  Rng rng(1008);
  bool ok = true;
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    int n = rep < 25 ? 2 : 3;
    PoolSpec spec;
    switch (rep % 3) {
      case 0: spec = testing::random_product_pool(rng, n); break;
      case 1: spec = testing::random_mean_pool(rng, n); break;
      default: spec = testing::random_curve_pool(rng, n); break;
    }
    spec.gamma = rep % 2 == 0 ? 1.0 : 0.997;
    auto c = testing::random_prices(rng, n);
    double pitch = 1e-3;
    double c1 = 0.0;
    for (int i = 0; i < n; ++i) c1 += c[i];
    double bound = 2.0 * pitch * c1 + 1e-9;
    double grid = brute_force_arbitrage(spec, c, pitch).profit;
    double solved = solve_arbitrage(spec, c).profit;
    worst = std::max(worst, std::abs(grid - solved));
    ok = ok && std::abs(grid - solved) <= bound;
  }
  std::printf("    max |grid - solver| %.3e\n", worst);
  report(8, "profit within 2*pitch*||c||_1 + 1e-9 of the grid oracle", ok);
}

TEST_CASE("9: monotone distance trading function properties") {
  Rng rng(1009);
  bool ok = true;
  for (int kind = 0; kind < 3; ++kind) {
    PoolSpec spec;
    switch (kind) {
      case 0: spec = testing::random_product_pool(rng, 2, 0.997); break;
      case 1: spec = testing::random_mean_pool(rng, 2, 0.997); break;
      default: spec = testing::random_curve_pool(rng, 2, 0.997); break;
    }
    auto rep = check_monotone_phi(spec, 1000, 909 + kind);
    ok = ok && rep.passed();
    if (!rep.passed())
      std::printf("    kind %d: %zu failures, first: %s\n", kind,
                  rep.failures.size(), rep.failures.front().inputs.c_str());
  }
  report(9, "zero-iff-feasible, coordinate monotone, segment convex (3000 samples)",
         ok);
}

TEST_CASE("10: simulator price tracking") {
  auto t0 = Clock::now();
  SimConfig cfg;
  cfg.pool = PoolSpec::product({1000.0, 1000.0});
  cfg.model = GbmModel{0.0, 0.5};
  cfg.steps = 10000;
  cfg.dt = 1.0 / 365.0;
  cfg.seed = 10;
  auto feeless = trace_stats(simulate(cfg));
  double dt = seconds_since(t0);

  double g = 0.997;
  cfg.pool.gamma = g;
  auto fee_trace = simulate(cfg);
  double band_excess = 0.0;
  for (const auto& s : fee_trace.steps) {
    double rel = std::abs(s.reported[1] - s.prices[1]) / s.prices[1];
    band_excess = std::max(band_excess, rel - (1.0 / g - 1.0));
  }
  std::printf("    feeless max gap %.3e (%.2fs); fee-band excess %.3e\n",
              feeless.max_price_gap, dt, band_excess);
  // The 1e-7 band allowance absorbs the solver's profit-dust cutoff: price
  // gaps just outside the band produce profits below the cutoff and are
  // legitimately left unarbitraged.
  report(10, "feeless gap <= 1e-6 in <5s; fee gap within the fee band",
         feeless.max_price_gap <= 1e-6 && dt < 5.0 && band_excess <= 1e-7);
}
