// Total reserve value via convex duality: Fenchel conjugates, the scalar dual
// function, closed forms for mean pools, and the Curve lower bound.
#pragma once

#include "cfmm/types.hpp"

namespace cfmm {

enum class ValueMethod { ClosedFormMean, DualNumeric, PrimalNumeric, LowerBoundOnly };

inline const char* to_string(ValueMethod m) {
  switch (m) {
    case ValueMethod::ClosedFormMean: return "closed_form_mean";
    case ValueMethod::DualNumeric: return "dual_numeric";
    case ValueMethod::PrimalNumeric: return "primal_numeric";
    case ValueMethod::LowerBoundOnly: return "lower_bound_only";
  }
  return "?";
}

struct ReserveValueResult {
  double value = 0.0;        // p*_R(c), numeraire units
  double dual_lambda = 0.0;  // maximizer of the dual function
  double primal_value = 0.0; // cross-check via the fee-less arbitrage optimum
  double duality_gap = 0.0;  // |dual - primal| / max(1, |dual|)
  ValueMethod method = ValueMethod::DualNumeric;
};

// Conjugate of the negated weighted geometric mean, in indicator form:
// 0 when prod(-y_i / w_i)^{w_i} >= 1 (y <= 0), kInfSentinel otherwise.
double conjugate_neg_geomean(const Vec& y, const Vec& w);

// Conjugate of x -> 1/prod(x_i):
// -(n+1) prod(-y_i)^{1/(n+1)} for y <= 0, kInfSentinel otherwise.
double conjugate_reciprocal_product(const Vec& y);

// Dual function g(lambda) of the reserve-value problem at invariant level k.
// Returns -kInfSentinel outside the conjugate's domain.
double dual_g(const PoolSpec& spec, InvariantLevel k, const PriceVector& c,
              double lam);

// Total reserve value p*_R(c). Mean pools in closed form, Curve pools by
// golden-section maximization of dual_g; both cross-checked against the
// primal (fee-less arbitrage) route. Evaluated on the current frontier
// level k = psi(R).
ReserveValueResult reserve_value(const PoolSpec& spec, const PriceVector& c);

// (k / alpha) * min_i c_i. Throws for alpha = 0.
double curve_value_lower_bound(const PoolSpec& spec, const PriceVector& c);

}  // namespace cfmm
