#ifndef FFF_STATE_HPP
#define FFF_STATE_HPP

#include <Eigen/Core>

namespace fff {

/// Point of the lifted state space: position q and momentum p, same length.
struct LiftedState {
  Eigen::VectorXd q;
  Eigen::VectorXd p;

  Eigen::Index dim() const { return q.size(); }

  /// The momentum-flip involution s(q, p) = (q, -p).
  LiftedState flipped() const { return {q, -p}; }

  bool finite() const { return q.allFinite() && p.allFinite(); }
};

/// Gaussian kinetic energy K(p) = ||p||^2 / 2.
inline double kinetic_energy(const Eigen::VectorXd& p) {
  return 0.5 * p.squaredNorm();
}

}  // namespace fff

#endif  // FFF_STATE_HPP
