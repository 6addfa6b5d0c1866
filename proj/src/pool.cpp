#include "cfmm/pool.hpp"

#include <cmath>
#include <sstream>

namespace cfmm {

namespace {

bool strictly_positive(const Vec& v) {
  for (double x : v) {
    if (!(x > kReserveFloor) || !std::isfinite(x)) return false;
  }
  return true;
}

void append(std::ostringstream& os, bool& first, const std::string& msg) {
  if (!first) os << "; ";
  os << msg;
  first = false;
}

}  // namespace

PoolSpec PoolSpec::product(Vec r, double gamma) {
  PoolSpec s;
  s.kind = PoolKind::Product;
  s.n = static_cast<int>(r.size());
  s.reserves = Reserves(std::move(r));
  s.gamma = gamma;
  s.weights.assign(static_cast<std::size_t>(s.n), 1.0 / s.n);
  s.validate();
  return s;
}

PoolSpec PoolSpec::mean(Vec r, Vec w, double gamma) {
  PoolSpec s;
  s.kind = PoolKind::Mean;
  s.n = static_cast<int>(r.size());
  s.reserves = Reserves(std::move(r));
  s.gamma = gamma;
  s.weights = std::move(w);
  s.validate();
  return s;
}

PoolSpec PoolSpec::curve(Vec r, double alpha, double beta, double gamma) {
  PoolSpec s;
  s.kind = PoolKind::Curve;
  s.n = static_cast<int>(r.size());
  s.reserves = Reserves(std::move(r));
  s.gamma = gamma;
  s.alpha = alpha;
  s.beta = beta;
  s.validate();
  return s;
}

void PoolSpec::validate() const {
  std::ostringstream os;
  bool ok = true;
  if (n < 2) append(os, ok, "coin count must be >= 2");
  if (reserves.size() != static_cast<std::size_t>(n))
    append(os, ok, "reserves length does not match coin count");
  if (!reserves.strictly_positive())
    append(os, ok, "all reserves must be finite and strictly positive");
  if (!(gamma > 0.0) || !(gamma <= 1.0))
    append(os, ok, "gamma must lie in (0, 1]");
  if (is_mean_like()) {
    if (weights.size() != static_cast<std::size_t>(n)) {
      append(os, ok, "weights length does not match coin count");
    } else {
      double sum = 0.0;
      for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
          append(os, ok, "weights must be nonnegative and finite");
        sum += w;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        append(os, ok, "weights must sum to 1 within 1e-12");
    }
  } else {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
      append(os, ok, "alpha must be >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta))
      append(os, ok, "beta must be >= 0");
    if (alpha == 0.0 && beta == 0.0)
      append(os, ok, "curve pool requires alpha > 0 or beta > 0");
  }
  if (!ok) throw std::invalid_argument("invalid pool spec: " + os.str());
}

double eval_psi(const PoolSpec& spec, const Vec& r) {
  if (r.size() != static_cast<std::size_t>(spec.n))
    throw std::invalid_argument("eval_psi: length mismatch");
  if (!strictly_positive(r))
    throw std::domain_error("eval_psi: nonpositive reserve entry");
  if (spec.is_mean_like()) {
    double log_sum = 0.0;
    for (int i = 0; i < spec.n; ++i)
      log_sum += spec.weights[static_cast<std::size_t>(i)] * std::log(r[static_cast<std::size_t>(i)]);
    return std::exp(log_sum);
  }
  double sum = 0.0;
  double prod = 1.0;
  for (double x : r) {
    sum += x;
    prod *= x;
  }
  return spec.alpha * sum - spec.beta / prod;
}

double eval_psi(const PoolSpec& spec, const Reserves& r) {
  return eval_psi(spec, r.r);
}

double invariant_level(const PoolSpec& spec) {
  return eval_psi(spec, spec.reserves);
}

Vec post_trade_point(const PoolSpec& spec, const Trade& trade) {
  if (trade.delta.size() != static_cast<std::size_t>(spec.n) ||
      trade.lambda.size() != static_cast<std::size_t>(spec.n))
    throw std::invalid_argument("trade length does not match coin count");
  Vec x(static_cast<std::size_t>(spec.n));
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = spec.reserves[i] + spec.gamma * trade.delta[i] - trade.lambda[i];
  return x;
}

double eval_phi(const PoolSpec& spec, const Trade& trade) {
  Vec x = post_trade_point(spec, trade);
  if (!strictly_positive(x))
    throw std::domain_error("eval_phi: trade drains a coin");
  return eval_psi(spec, x);
}

bool trade_feasible(const PoolSpec& spec, const Trade& trade, double tol) {
  if (!trade.nonnegative()) return false;
  Vec x = post_trade_point(spec, trade);
  if (!strictly_positive(x)) return false;
  return level_ok(eval_psi(spec, x), invariant_level(spec), tol);
}

Reserves apply_trade(const PoolSpec& spec, const Trade& trade, double tol) {
  if (!trade_feasible(spec, trade, tol))
    throw std::invalid_argument("apply_trade: trade rejected (infeasible)");
  Vec out(static_cast<std::size_t>(spec.n));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = spec.reserves[i] + trade.delta[i] - trade.lambda[i];
  return Reserves(std::move(out));
}

bool in_reachable_set(const PoolSpec& spec, const Reserves& r0,
                      const Reserves& r1, double tol) {
  if (r0.size() != r1.size() || r0.size() != static_cast<std::size_t>(spec.n))
    throw std::invalid_argument("in_reachable_set: length mismatch");
  if (!r0.strictly_positive() || !r1.strictly_positive())
    throw std::domain_error("in_reachable_set: reserves must be strictly positive");
  Vec x(r0.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double diff = r1[i] - r0[i];
    x[i] = diff > 0.0 ? r0[i] + spec.gamma * diff : r1[i];
  }
  if (!strictly_positive(x)) return false;
  return level_ok(eval_psi(spec, x), eval_psi(spec, r0), tol);
}

Vec grad_psi(const PoolSpec& spec, const Vec& r) {
  double psi = eval_psi(spec, r);  // validates positivity
  Vec g(r.size());
  if (spec.is_mean_like()) {
    for (std::size_t i = 0; i < r.size(); ++i)
      g[i] = spec.weights[i] / r[i] * psi;
    return g;
  }
  double prod = 1.0;
  for (double x : r) prod *= x;
  for (std::size_t i = 0; i < r.size(); ++i)
    g[i] = spec.alpha + spec.beta / (r[i] * prod);
  return g;
}

Vec grad_psi(const PoolSpec& spec, const Reserves& r) {
  return grad_psi(spec, r.r);
}

}  // namespace cfmm
