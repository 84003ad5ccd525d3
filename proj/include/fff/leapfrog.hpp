#ifndef FFF_LEAPFROG_HPP
#define FFF_LEAPFROG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>

#include "fff/state.hpp"
#include "fff/targets.hpp"

namespace fff {

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what, std::int64_t jump_index = -1)
      : std::runtime_error(what), jump_index(jump_index) {}
  std::int64_t jump_index;
};

/// Wraps a target with evaluation counters. One gradient evaluation is
/// counted per value_and_gradient call; the potential value obtained there is
/// free. Value-only calls are tallied separately.
class CountingTarget {
 public:
  explicit CountingTarget(const Target& target) : target_(&target) {}

  int dim() const { return target_->dim; }
  const Target& target() const { return *target_; }

  double value_and_gradient(const Eigen::VectorXd& q, Eigen::VectorXd& grad) {
    ++grad_evals_;
    return target_->value_and_gradient(q, grad);
  }

  double value(const Eigen::VectorXd& q) {
    ++value_evals_;
    return target_->potential(q);
  }

  std::int64_t grad_evals() const { return grad_evals_; }
  std::int64_t value_evals() const { return value_evals_; }

 private:
  const Target* target_;
  std::int64_t grad_evals_ = 0;
  std::int64_t value_evals_ = 0;
};

struct LeapfrogStepResult {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  Eigen::VectorXd grad;  // grad U at the new q
  double potential;      // U at the new q
};

/// One leapfrog step with step size eps:
///   p_half = p - (eps/2) grad U(q);  q' = q + eps p_half;
///   p'     = p_half - (eps/2) grad U(q').
/// Requires grad_q = grad U(q); costs exactly one new gradient evaluation.
/// Throws NumericError if the step leaves the finite range.
inline LeapfrogStepResult leapfrog_step(const Eigen::VectorXd& q,
                                        const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& grad_q,
                                        double eps, CountingTarget& target) {
  LeapfrogStepResult r;
  const Eigen::VectorXd p_half = p - (0.5 * eps) * grad_q;
  r.q = q + eps * p_half;
  if (!r.q.allFinite())
    throw NumericError("leapfrog_step: non-finite position");
  r.potential = target.value_and_gradient(r.q, r.grad);
  r.p = p_half - (0.5 * eps) * r.grad;
  if (!r.p.allFinite() || !r.grad.allFinite() || !std::isfinite(r.potential))
    throw NumericError("leapfrog_step: non-finite momentum or gradient");
  return r;
}

struct Trajectory {
  LiftedState end;
  Eigen::VectorXd grad_end;  // grad U at end.q
  double u_end = 0.0;        // U at end.q
  double dH = 0.0;           // H(end) - H(start)
  bool divergent = false;    // left the finite range; dH = +inf
};

/// L leapfrog steps from (q, p). Costs L gradient evaluations. A non-finite
/// intermediate marks the trajectory divergent with dH = +inf instead of
/// throwing, so a jump rate of g(e^{-inf}) = 0 falls out.
inline Trajectory integrate_leapfrog(const Eigen::VectorXd& q,
                                     const Eigen::VectorXd& p,
                                     const Eigen::VectorXd& grad_q, double u_q,
                                     double eps, int L,
                                     CountingTarget& target) {
  Trajectory t;
  const double h_start = u_q + kinetic_energy(p);
  Eigen::VectorXd cq = q, cp = p, cg = grad_q;
  double cu = u_q;
  for (int step = 0; step < L; ++step) {
    try {
      auto r = leapfrog_step(cq, cp, cg, eps, target);
      cq = std::move(r.q);
      cp = std::move(r.p);
      cg = std::move(r.grad);
      cu = r.potential;
    } catch (const NumericError&) {
      t.divergent = true;
      t.dH = std::numeric_limits<double>::infinity();
      return t;
    }
  }
  t.end = {std::move(cq), std::move(cp)};
  t.grad_end = std::move(cg);
  t.u_end = cu;
  t.dH = (cu + kinetic_energy(t.end.p)) - h_start;
  if (!std::isfinite(t.dH)) {
    t.divergent = true;
    t.dH = std::numeric_limits<double>::infinity();
  }
  return t;
}

}  // namespace fff

#endif  // FFF_LEAPFROG_HPP
