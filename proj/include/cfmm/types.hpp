// Core domain types for constant function market maker analysis.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmm {

using Vec = std::vector<double>;

// Reserve entries below this floor are treated as drained (domain violation).
inline constexpr double kReserveFloor = 1e-12;

// Default feasibility tolerance, relative to the invariant level.
inline constexpr double kFeasibilityTol = 1e-9;

// Saturating stand-ins for +/-infinity used inside optimization loops.
inline constexpr double kInfSentinel = 1e300;

// Raised when a numeric routine (root find, line search, projection) cannot
// converge or bracket. CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

enum class PoolKind { Product, Mean, Curve };

inline const char* to_string(PoolKind k) {
  switch (k) {
    case PoolKind::Product: return "product";
    case PoolKind::Mean: return "mean";
    case PoolKind::Curve: return "curve";
  }
  return "?";
}

struct Reserves {
  Vec r;

  Reserves() = default;
  explicit Reserves(Vec v) : r(std::move(v)) {}

  std::size_t size() const { return r.size(); }
  double operator[](std::size_t i) const { return r[i]; }
  double& operator[](std::size_t i) { return r[i]; }

  bool strictly_positive() const {
    for (double x : r) {
      if (!(x > kReserveFloor) || !std::isfinite(x)) return false;
    }
    return true;
  }
};

// Input basket Delta and output basket Lambda, both nonnegative.
struct Trade {
  Vec delta;
  Vec lambda;

  Trade() = default;
  Trade(Vec d, Vec l) : delta(std::move(d)), lambda(std::move(l)) {}

  static Trade zero(std::size_t n) { return Trade(Vec(n, 0.0), Vec(n, 0.0)); }

  bool is_zero() const {
    for (double x : delta)
      if (x != 0.0) return false;
    for (double x : lambda)
      if (x != 0.0) return false;
    return true;
  }

  bool nonnegative() const {
    for (double x : delta)
      if (!(x >= 0.0) || !std::isfinite(x)) return false;
    for (double x : lambda)
      if (!(x >= 0.0) || !std::isfinite(x)) return false;
    return true;
  }
};

// Strictly positive reference-market prices.
struct PriceVector {
  Vec c;

  PriceVector() = default;
  explicit PriceVector(Vec v) : c(std::move(v)) {}

  std::size_t size() const { return c.size(); }
  double operator[](std::size_t i) const { return c[i]; }

  void validate() const {
    if (c.empty()) throw std::invalid_argument("price vector is empty");
    for (double x : c) {
      if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("price vector entries must be finite and > 0");
    }
  }
};

struct InvariantLevel {
  double k = 0.0;
};

// A pool: trading-function kind, parameters, fee retention factor, reserves.
// Product pools are evaluated as uniform-weight Mean pools; the kind is kept
// for config round-trips.
struct PoolSpec {
  PoolKind kind = PoolKind::Product;
  int n = 0;
  Reserves reserves;
  double gamma = 1.0;   // fee retention factor, (0, 1]
  Vec weights;          // Mean/Product
  double alpha = 0.0;   // Curve
  double beta = 0.0;    // Curve

  static PoolSpec product(Vec r, double gamma = 1.0);
  static PoolSpec mean(Vec r, Vec w, double gamma = 1.0);
  static PoolSpec curve(Vec r, double alpha, double beta, double gamma = 1.0);

  bool is_mean_like() const { return kind != PoolKind::Curve; }

  // Throws std::invalid_argument listing every violated invariant.
  void validate() const;

  PoolSpec with_reserves(Reserves r) const {
    PoolSpec s = *this;
    s.reserves = std::move(r);
    return s;
  }

  PoolSpec feeless() const {
    PoolSpec s = *this;
    s.gamma = 1.0;
    return s;
  }
};

// Small vector helpers shared across modules.
inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vec pos_part(const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] > 0.0 ? a[i] : 0.0;
  return out;
}

// Feasibility comparison of a trading-function value against a level,
// with tolerance relative to the level's magnitude (Curve levels may be
// negative).
inline bool level_ok(double psi_post, double level, double tol) {
  return psi_post >= level - tol * std::max(1.0, std::abs(level));
}

}  // namespace cfmm
