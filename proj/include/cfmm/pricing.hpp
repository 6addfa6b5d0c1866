// Reported prices from supporting hyperplanes and marginal-price estimation.
#pragma once

#include "cfmm/types.hpp"

namespace cfmm {

struct ReportedPrice {
  Vec raw_gradient;    // grad psi at the reserves
  int numeraire = 0;
  Vec normalized;      // raw_gradient / raw_gradient[numeraire]
};

// Zero-fee supporting-hyperplane price at reserves r, normalized so the
// numeraire coin prices at exactly 1.
ReportedPrice reported_price(const PoolSpec& spec, const Reserves& r,
                             int numeraire);

// Minimal cost c^T Delta of receiving the output basket while keeping the
// trade feasible. Throws std::domain_error when the output cannot be produced.
double cost_of_output(const PoolSpec& spec, const Reserves& r,
                      const PriceVector& c, const Vec& output);

// cost_of_output(eps * direction) / eps; converges to c^T direction as
// eps -> 0 for gamma = 1 pools priced at c proportional to grad psi(r).
double marginal_price_estimate(const PoolSpec& spec, const Reserves& r,
                               const PriceVector& c, const Vec& direction,
                               double eps);

}  // namespace cfmm
