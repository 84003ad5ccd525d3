#ifndef FFF_BALANCING_HPP
#define FFF_BALANCING_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fff {

/// Balancing functions g weighting jump rates by target density ratios.
/// All satisfy g(0) = 0, g(1) = 1 and the reversal identity g(t) = t*g(1/t),
/// and are non-decreasing with g(t) >= min(1, t).
enum class BalancingKind {
  Metropolis,  // g(t) = min(1, t)
  Barker,      // g(t) = 2t / (1 + t)
  Sqrt,        // g(t) = sqrt(t)
};

inline const char* to_string(BalancingKind k) {
  switch (k) {
    case BalancingKind::Metropolis: return "metropolis";
    case BalancingKind::Barker: return "barker";
    case BalancingKind::Sqrt: return "sqrt";
  }
  return "?";
}

/// g(t) for t >= 0. Throws std::domain_error on negative or non-finite input.
inline double balancing_eval(BalancingKind kind, double t) {
  if (!(t >= 0.0) || std::isinf(t))
    throw std::domain_error("balancing_eval: t must be finite and >= 0, got " +
                            std::to_string(t));
  switch (kind) {
    case BalancingKind::Metropolis: return std::min(1.0, t);
    case BalancingKind::Barker: return 2.0 * t / (1.0 + t);
    case BalancingKind::Sqrt: return std::sqrt(t);
  }
  return 0.0;
}

/// g(exp(x)) without forming exp(x); x = -infinity gives 0. For bounded kinds
/// x = +infinity saturates at the supremum (1 for Metropolis, 2 for Barker);
/// Sqrt has no supremum and x = +infinity is a domain error.
inline double balancing_eval_logratio(BalancingKind kind, double x) {
  if (std::isnan(x)) throw std::domain_error("balancing_eval_logratio: NaN");
  switch (kind) {
    case BalancingKind::Metropolis:
      return std::exp(std::min(0.0, x));
    case BalancingKind::Barker:
      // 2 * logistic(x), split by sign to avoid overflow in exp.
      if (x >= 0.0) return 2.0 / (1.0 + std::exp(-x));
      return 2.0 * std::exp(x) / (1.0 + std::exp(x));
    case BalancingKind::Sqrt:
      if (std::isinf(x) && x > 0.0)
        throw std::domain_error("balancing_eval_logratio: sqrt(exp(+inf))");
      return std::exp(0.5 * x);
  }
  return 0.0;
}

/// Minimal involution rate: (backward - forward)^+, where forward/backward are
/// the balanced outflow rates at a state and at its involution image. Exactly
/// one of the pair (a, s(a)) gets a nonzero rate.
inline double minimal_flip_rate(double forward, double backward) {
  return std::max(backward - forward, 0.0);
}

}  // namespace fff

#endif  // FFF_BALANCING_HPP
