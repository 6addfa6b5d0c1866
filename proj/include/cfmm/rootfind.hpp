// Scalar root finding and 1-D concave maximization.
#pragma once

#include <cmath>
#include <functional>

#include "cfmm/types.hpp"

namespace cfmm {

// Bisection for f with f(lo) and f(hi) of opposite sign. Converges to
// relative interval width rel_tol. Throws NumericalError on a bad bracket.
template <typename F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-13,
              int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NumericalError("bisect: endpoints do not bracket a root (f(lo)=" +
                         std::to_string(flo) + ", f(hi)=" + std::to_string(fhi) + ")");
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * (std::abs(lo) + std::abs(hi) + 1.0)) break;
  }
  return 0.5 * (lo + hi);
}

// Golden-section maximization of a unimodal f on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi, double rel_tol = 1e-11,
                  int max_iter = 400) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter; ++it) {
    if (b - a <= rel_tol * (std::abs(a) + std::abs(b) + 1.0)) break;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Golden-section minimization (negated maximization).
template <typename F>
double golden_min(F&& f, double lo, double hi, double rel_tol = 1e-11,
                  int max_iter = 400) {
  return golden_max([&](double x) { return -f(x); }, lo, hi, rel_tol, max_iter);
}

}  // namespace cfmm
