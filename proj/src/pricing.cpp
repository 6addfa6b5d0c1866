#include "cfmm/pricing.hpp"

#include <cmath>
#include <limits>

#include "cfmm/arbitrage.hpp"
#include "cfmm/pool.hpp"

namespace cfmm {

ReportedPrice reported_price(const PoolSpec& spec, const Reserves& r,
                             int numeraire) {
  if (numeraire < 0 || numeraire >= spec.n)
    throw std::invalid_argument("reported_price: numeraire index out of range");
  ReportedPrice out;
  out.raw_gradient = grad_psi(spec, r);
  out.numeraire = numeraire;
  out.normalized.resize(out.raw_gradient.size());
  double gk = out.raw_gradient[static_cast<std::size_t>(numeraire)];
  for (std::size_t i = 0; i < out.normalized.size(); ++i)
    out.normalized[i] = out.raw_gradient[i] / gk;
  out.normalized[static_cast<std::size_t>(numeraire)] = 1.0;
  return out;
}

double cost_of_output(const PoolSpec& spec, const Reserves& r,
                      const PriceVector& c, const Vec& output) {
  const auto n = static_cast<std::size_t>(spec.n);
  if (output.size() != n || c.size() != n || r.size() != n)
    throw std::invalid_argument("cost_of_output: length mismatch");
  c.validate();
  for (double x : output)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument("cost_of_output: output must be nonnegative");

  PoolSpec pool = spec.with_reserves(r);
  const double level = invariant_level(pool);

  double best = std::numeric_limits<double>::infinity();

  // Enumerate which coins carry positive input; the rest sit at r_j - L_j.
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    Vec fixed(n);
    bool domain_ok = true;
    for (std::size_t j = 0; j < n; ++j) {
      fixed[j] = r[j] - output[j];
      if (!(mask & (1ul << j)) && !(fixed[j] > kReserveFloor)) domain_ok = false;
    }
    if (!domain_ok) continue;

    if (mask == 0) {
      if (level_ok(eval_psi(pool, fixed), level, kFeasibilityTol))
        best = std::min(best, 0.0);
      continue;
    }

    std::vector<int> free_idx;
    Vec scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ul << i)) {
        free_idx.push_back(static_cast<int>(i));
        scale[i] = c[i] / pool.gamma;
      }
    }
    auto x = detail::solve_frontier_stationary(pool, level, free_idx, scale, fixed);
    if (!x) continue;
    double cost = 0.0;
    bool signs_ok = true;
    for (int i : free_idx) {
      auto ui = static_cast<std::size_t>(i);
      double delta = ((*x)[ui] - fixed[ui]) / pool.gamma;
      if (delta < -1e-12 * (1.0 + r[ui])) {
        signs_ok = false;
        break;
      }
      cost += c[ui] * std::max(delta, 0.0);
    }
    if (signs_ok) best = std::min(best, cost);
  }

  if (!std::isfinite(best))
    throw std::domain_error("cost_of_output: output not producible for any input");
  return best;
}

double marginal_price_estimate(const PoolSpec& spec, const Reserves& r,
                               const PriceVector& c, const Vec& direction,
                               double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("marginal_price_estimate: eps must be > 0");
  Vec output(direction.size());
  for (std::size_t i = 0; i < output.size(); ++i) output[i] = eps * direction[i];
  return cost_of_output(spec, r, c, output) / eps;
}

}  // namespace cfmm
