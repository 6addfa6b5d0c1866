#include "cfmm/value.hpp"

#include <algorithm>
#include <cmath>

#include "cfmm/arbitrage.hpp"
#include "cfmm/pool.hpp"
#include "cfmm/rootfind.hpp"

namespace cfmm {

double conjugate_neg_geomean(const Vec& y, const Vec& w) {
  if (y.size() != w.size())
    throw std::invalid_argument("conjugate_neg_geomean: length mismatch");
  double log_cond = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 0.0) return kInfSentinel;
    if (w[i] == 0.0) continue;
    if (y[i] == 0.0) return kInfSentinel;  // sup diverges along that axis
    log_cond += w[i] * std::log(-y[i] / w[i]);
  }
  return log_cond >= -1e-15 ? 0.0 : kInfSentinel;
}

double conjugate_reciprocal_product(const Vec& y) {
  const double n = static_cast<double>(y.size());
  double prod = 1.0;
  for (double yi : y) {
    if (yi > 0.0) return kInfSentinel;
    prod *= -yi;
  }
  return -(n + 1.0) * std::pow(prod, 1.0 / (n + 1.0));
}

double dual_g(const PoolSpec& spec, InvariantLevel k, const PriceVector& c,
              double lam) {
  if (!(lam >= 0.0)) throw std::invalid_argument("dual_g: lambda must be >= 0");
  const auto n = static_cast<std::size_t>(spec.n);
  if (c.size() != n) throw std::invalid_argument("dual_g: price length mismatch");

  if (spec.is_mean_like()) {
    if (lam == 0.0) return 0.0;
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = -c[i] / lam;
    if (conjugate_neg_geomean(y, spec.weights) >= kInfSentinel)
      return -kInfSentinel;
    return lam * k.k;
  }

  // Curve: lam*k + (n+1) (lam*beta)^{1/(n+1)} prod(c_i - lam*alpha)^{1/(n+1)},
  // valid while c_i - lam*alpha >= 0 for all i.
  if (lam == 0.0) return 0.0;
  double log_prod = std::log(lam * spec.beta);
  for (std::size_t i = 0; i < n; ++i) {
    double d = c[i] - lam * spec.alpha;
    if (d < 0.0) return -kInfSentinel;
    if (d == 0.0) return lam * k.k;
    log_prod += std::log(d);
  }
  double np1 = static_cast<double>(spec.n) + 1.0;
  return lam * k.k + np1 * std::exp(log_prod / np1);
}

namespace {

double mean_closed_form_value(const PoolSpec& spec, const PriceVector& c,
                              double k, double* lam_out) {
  double log_lam = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double w = spec.weights[i];
    if (w == 0.0) continue;
    log_lam += w * std::log(c[i] / w);
  }
  double lam = std::exp(log_lam);
  if (lam_out) *lam_out = lam;
  return k * lam;
}

}  // namespace

ReserveValueResult reserve_value(const PoolSpec& spec, const PriceVector& c) {
  spec.validate();
  c.validate();
  if (c.size() != static_cast<std::size_t>(spec.n))
    throw std::invalid_argument("reserve_value: price length mismatch");

  const double k = invariant_level(spec);
  ReserveValueResult out;

  if (spec.is_mean_like()) {
    out.method = ValueMethod::ClosedFormMean;
    out.value = mean_closed_form_value(spec, c, k, &out.dual_lambda);
  } else {
    // Golden-section maximization of the concave scalar dual. The domain
    // condition c_i - lam*alpha >= 0 gives the bracket when alpha > 0.
    InvariantLevel lvl{k};
    double hi;
    if (spec.alpha > 0.0) {
      hi = *std::min_element(c.c.begin(), c.c.end()) / spec.alpha;
    } else {
      hi = 1.0;
      int guard = 0;
      // Expand until g turns down; g is concave with g(lam) -> -inf slope
      // once lam*k (k < 0 when alpha = 0) dominates.
      while (dual_g(spec, lvl, c, hi * 2.0) > dual_g(spec, lvl, c, hi)) {
        hi *= 2.0;
        if (++guard > 600)
          throw NumericalError("reserve_value: dual bracket expansion failed");
      }
      hi *= 4.0;
    }
    double lam = golden_max(
        [&](double l) { return dual_g(spec, lvl, c, l); }, 0.0, hi, 1e-13, 600);
    out.method = ValueMethod::DualNumeric;
    out.dual_lambda = lam;
    out.value = dual_g(spec, lvl, c, lam);
    if (!(out.value > -kInfSentinel))
      throw NumericalError("reserve_value: dual maximization left the domain (bracket [0, " +
                           std::to_string(hi) + "])");
  }

  // Primal route: fee-less optimal arbitrage at c lands on the value-minimizing
  // reachable point.
  ArbitrageResult arb = solve_arbitrage_feeless(spec.feeless(), c);
  out.primal_value = dot(c.c, arb.post_reserves.r);
  out.duality_gap =
      std::abs(out.value - out.primal_value) / std::max(1.0, std::abs(out.value));
  return out;
}

double curve_value_lower_bound(const PoolSpec& spec, const PriceVector& c) {
  if (spec.kind != PoolKind::Curve)
    throw std::invalid_argument("curve_value_lower_bound: pool is not a curve pool");
  if (!(spec.alpha > 0.0))
    throw std::invalid_argument("curve_value_lower_bound: undefined for alpha = 0");
  c.validate();
  double k = invariant_level(spec);
  return k / spec.alpha * *std::min_element(c.c.begin(), c.c.end());
}

}  // namespace cfmm
