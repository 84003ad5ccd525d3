#ifndef FFF_SAMPLERS_HPP
#define FFF_SAMPLERS_HPP

#include <cmath>
#include <stdexcept>
#include <utility>

#include "fff/balancing.hpp"
#include "fff/leapfrog.hpp"
#include "fff/mjp.hpp"
#include "fff/rng.hpp"
#include "fff/state.hpp"

namespace fff {

struct FFFConfig {
  double epsilon = 0.1;
  int L = 1;
  double lambda_refresh = 1.0;
  BalancingKind balancing = BalancingKind::Sqrt;

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    if (!(lambda_refresh > 0.0))
      throw std::invalid_argument("lambda_refresh must be > 0");
  }
};

enum class WalkVariant { BJS, BGW, RGW };

struct BJSConfig {
  double epsilon = 0.1;
  double lambda_refresh = 1.0;
  BalancingKind balancing = BalancingKind::Sqrt;  // ignored by RGW
  WalkVariant variant = WalkVariant::BJS;

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(lambda_refresh > 0.0))
      throw std::invalid_argument("lambda_refresh must be > 0");
  }
};

/// Rates of the leapfrog-jump sampler as a function of the energy errors of
/// the L-step forward and backward trajectories. Entry order is fixed:
/// Jump, Flip, Refresh.
inline RateMenu fff_menu_from_dh(double forward_dH, double backward_dH,
                                 double lambda_refresh, BalancingKind g) {
  const double jump = balancing_eval_logratio(g, -forward_dH);
  const double backward = balancing_eval_logratio(g, -backward_dH);
  RateMenu menu;
  menu.add(EventKind::Jump, jump);
  menu.add(EventKind::Flip, minimal_flip_rate(jump, backward));
  menu.add(EventKind::Refresh, lambda_refresh);
  return menu;
}

/// Randomized-HMC rates: Metropolis jump rate with the complementary
/// (non-minimal) flip rate 1 - min(1, e^{-dH}).
inline RateMenu rhmc_menu_from_dh(double forward_dH, double lambda_refresh) {
  const double jump =
      balancing_eval_logratio(BalancingKind::Metropolis, -forward_dH);
  const double flip = forward_dH > 0.0 ? -std::expm1(-forward_dH) : 0.0;
  RateMenu menu;
  menu.add(EventKind::Jump, jump);
  menu.add(EventKind::Flip, flip);
  menu.add(EventKind::Refresh, lambda_refresh);
  return menu;
}

/// Rates of the linear-walk samplers from the potential differences of the
/// forward/backward steps and the directional derivative <p, grad U(q)>.
/// Entry order is fixed: Jump, Bounce (BJS only), Flip, Refresh.
inline RateMenu bjs_menu_from_du(double du_forward, double du_backward,
                                 double p_dot_grad, double epsilon,
                                 double lambda_refresh, BalancingKind g,
                                 WalkVariant variant) {
  RateMenu menu;
  switch (variant) {
    case WalkVariant::BJS: {
      const double jump = balancing_eval_logratio(g, -du_forward);
      const double backward = balancing_eval_logratio(g, -du_backward);
      menu.add(EventKind::Jump, jump);
      menu.add(EventKind::Bounce, epsilon * std::max(p_dot_grad, 0.0));
      menu.add(EventKind::Flip,
               std::max(backward - jump - epsilon * p_dot_grad, 0.0));
      break;
    }
    case WalkVariant::BGW: {
      const double jump = balancing_eval_logratio(g, -du_forward);
      const double backward = balancing_eval_logratio(g, -du_backward);
      menu.add(EventKind::Jump, jump);
      menu.add(EventKind::Flip, minimal_flip_rate(jump, backward));
      break;
    }
    case WalkVariant::RGW: {
      const double jump = balancing_eval_logratio(BalancingKind::Metropolis,
                                                  -du_forward);
      menu.add(EventKind::Jump, jump);
      menu.add(EventKind::Flip,
               du_forward > 0.0 ? -std::expm1(-du_forward) : 0.0);
      break;
    }
  }
  menu.add(EventKind::Refresh, lambda_refresh);
  return menu;
}

/// Continuous-time sampler driven by L-step leapfrog jumps, momentum flips,
/// and refreshments. FlipRule::Minimal compares forward and backward
/// trajectories and flips at the minimal rate; FlipRule::Metropolized flips
/// at 1 - min(1, e^{-dH}) and never integrates backward.
///
/// The cache chains trajectories between events so each step costs L new
/// gradient evaluations in the jump-dominated regime: after a Jump the
/// backward energy error is the negated previous forward one and the endpoint
/// gradient is reused; after a Flip forward and backward swap; after a
/// Refresh only the trajectories recompute (the position is unchanged).
class LeapfrogDynamics {
 public:
  enum class FlipRule { Minimal, Metropolized };

  LeapfrogDynamics(FFFConfig cfg, FlipRule rule)
      : cfg_(cfg), rule_(rule) {
    cfg_.validate();
  }

  struct Cache {
    bool valid = false;
    double u_q = 0.0;
    Eigen::VectorXd grad_q;
    Trajectory forward;
    Trajectory backward;  // unused by Metropolized rule
  };

  const FFFConfig& config() const { return cfg_; }
  const Cache& cache() const { return cache_; }
  void reset() { cache_.valid = false; }

  /// Must be called for the current state before apply().
  RateMenu menu(const LiftedState& state, CountingTarget& target) {
    ensure_cache(state, target);
    if (rule_ == FlipRule::Minimal)
      return fff_menu_from_dh(cache_.forward.dH, cache_.backward.dH,
                              cfg_.lambda_refresh, cfg_.balancing);
    return rhmc_menu_from_dh(cache_.forward.dH, cfg_.lambda_refresh);
  }

  /// Cache-free recomputation of the menu, for cross-checking.
  RateMenu menu_scratch(const LiftedState& state, CountingTarget& target) const {
    Eigen::VectorXd grad_q;
    const double u_q = target.value_and_gradient(state.q, grad_q);
    const auto fwd = integrate_leapfrog(state.q, state.p, grad_q, u_q,
                                        cfg_.epsilon, cfg_.L, target);
    if (rule_ == FlipRule::Metropolized)
      return rhmc_menu_from_dh(fwd.dH, cfg_.lambda_refresh);
    const auto bwd = integrate_leapfrog(state.q, -state.p, grad_q, u_q,
                                        cfg_.epsilon, cfg_.L, target);
    return fff_menu_from_dh(fwd.dH, bwd.dH, cfg_.lambda_refresh,
                            cfg_.balancing);
  }

  LiftedState apply(const LiftedState& state, EventKind event, RngStream& rng,
                    CountingTarget& target) {
    if (!cache_.valid)
      throw std::logic_error("LeapfrogDynamics::apply before menu");
    switch (event) {
      case EventKind::Jump: {
        LiftedState next = cache_.forward.end;
        Cache fresh;
        fresh.valid = true;
        fresh.u_q = cache_.forward.u_end;
        fresh.grad_q = cache_.forward.grad_end;
        // Reversed previous trajectory: LF^L(q', -p') = (q, -p).
        fresh.backward.end = state.flipped();
        fresh.backward.grad_end = cache_.grad_q;
        fresh.backward.u_end = cache_.u_q;
        fresh.backward.dH = -cache_.forward.dH;
        fresh.forward =
            integrate_leapfrog(next.q, next.p, fresh.grad_q, fresh.u_q,
                               cfg_.epsilon, cfg_.L, target);
        cache_ = std::move(fresh);
        return next;
      }
      case EventKind::Flip: {
        LiftedState next = state.flipped();
        if (rule_ == FlipRule::Minimal) {
          std::swap(cache_.forward, cache_.backward);
        } else {
          cache_.forward =
              integrate_leapfrog(next.q, next.p, cache_.grad_q, cache_.u_q,
                                 cfg_.epsilon, cfg_.L, target);
        }
        return next;
      }
      case EventKind::Refresh: {
        LiftedState next{state.q, rng.normal_vector(state.dim())};
        recompute_trajectories(next, target);
        return next;
      }
      case EventKind::Bounce:
        break;
    }
    throw std::logic_error("LeapfrogDynamics: event not in menu");
  }

 private:
  void ensure_cache(const LiftedState& state, CountingTarget& target) {
    if (cache_.valid) return;
    cache_.u_q = target.value_and_gradient(state.q, cache_.grad_q);
    cache_.valid = true;
    recompute_trajectories(state, target);
  }

  void recompute_trajectories(const LiftedState& state,
                              CountingTarget& target) {
    cache_.forward =
        integrate_leapfrog(state.q, state.p, cache_.grad_q, cache_.u_q,
                           cfg_.epsilon, cfg_.L, target);
    if (rule_ == FlipRule::Minimal)
      cache_.backward =
          integrate_leapfrog(state.q, -state.p, cache_.grad_q, cache_.u_q,
                             cfg_.epsilon, cfg_.L, target);
  }

  FFFConfig cfg_;
  FlipRule rule_;
  Cache cache_;
};

/// Reflects p across the isodensity surface normal grad U(q).
inline Eigen::VectorXd reflect_momentum(const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& grad) {
  const double g2 = grad.squaredNorm();
  if (!(g2 > 0.0))
    throw NumericError("reflect_momentum: zero gradient at reflection");
  return p - (2.0 * p.dot(grad) / g2) * grad;
}

/// Continuous-time sampler built from linear steps q -> q + eps p, optional
/// gradient reflections (BJS), momentum flips, and refreshments. BGW drops
/// the reflections; RGW also replaces the minimal flip rate by the
/// Metropolized complement. Only BJS evaluates gradients.
class LinearDynamics {
 public:
  explicit LinearDynamics(BJSConfig cfg) : cfg_(cfg) { cfg_.validate(); }

  struct Cache {
    bool have_point = false;  // u_q (and grad_q for BJS)
    bool have_steps = false;  // potentials at q +- eps p
    double u_q = 0.0;
    Eigen::VectorXd grad_q;
    double u_forward = 0.0;
    double u_backward = 0.0;
  };

  const BJSConfig& config() const { return cfg_; }
  const Cache& cache() const { return cache_; }
  void reset() { cache_ = Cache{}; }

  RateMenu menu(const LiftedState& state, CountingTarget& target) {
    ensure_cache(state, target);
    return bjs_menu_from_du(cache_.u_forward - cache_.u_q,
                            cache_.u_backward - cache_.u_q,
                            needs_gradient() ? state.p.dot(cache_.grad_q) : 0.0,
                            cfg_.epsilon, cfg_.lambda_refresh, cfg_.balancing,
                            cfg_.variant);
  }

  RateMenu menu_scratch(const LiftedState& state, CountingTarget& target) const {
    const double u_q = target.value(state.q);
    const double u_f = target.value(state.q + cfg_.epsilon * state.p);
    const double u_b = target.value(state.q - cfg_.epsilon * state.p);
    double s = 0.0;
    if (needs_gradient()) s = state.p.dot(target.target().gradient(state.q));
    return bjs_menu_from_du(u_f - u_q, u_b - u_q, s, cfg_.epsilon,
                            cfg_.lambda_refresh, cfg_.balancing, cfg_.variant);
  }

  LiftedState apply(const LiftedState& state, EventKind event, RngStream& rng,
                    CountingTarget& target) {
    (void)target;
    if (!cache_.have_steps)
      throw std::logic_error("LinearDynamics::apply before menu");
    switch (event) {
      case EventKind::Jump: {
        LiftedState next{state.q + cfg_.epsilon * state.p, state.p};
        if (!next.finite())
          throw NumericError("linear step left the finite range");
        const double u_next = cache_.u_forward;
        cache_ = Cache{};
        cache_.have_point = true;
        cache_.u_q = u_next;
        cache_.grad_q.resize(0);  // BJS refills it on the next menu
        return next;
      }
      case EventKind::Bounce: {
        LiftedState next{state.q, reflect_momentum(state.p, cache_.grad_q)};
        cache_.have_steps = false;  // q unchanged, p changed
        return next;
      }
      case EventKind::Flip: {
        std::swap(cache_.u_forward, cache_.u_backward);
        return state.flipped();
      }
      case EventKind::Refresh: {
        LiftedState next{state.q, rng.normal_vector(state.dim())};
        cache_.have_steps = false;
        return next;
      }
    }
    throw std::logic_error("LinearDynamics: event not in menu");
  }

 private:
  bool needs_gradient() const { return cfg_.variant == WalkVariant::BJS; }

  void ensure_cache(const LiftedState& state, CountingTarget& target) {
    if (!cache_.have_point) {
      if (needs_gradient())
        cache_.u_q = target.value_and_gradient(state.q, cache_.grad_q);
      else
        cache_.u_q = target.value(state.q);
      cache_.have_point = true;
    } else if (needs_gradient() && cache_.grad_q.size() == 0) {
      // Position potential carried over a jump; gradient still missing.
      Eigen::VectorXd grad;
      target.value_and_gradient(state.q, grad);
      cache_.grad_q = std::move(grad);
    }
    if (!cache_.have_steps) {
      cache_.u_forward = target.value(state.q + cfg_.epsilon * state.p);
      cache_.u_backward = target.value(state.q - cfg_.epsilon * state.p);
      cache_.have_steps = true;
    }
  }

  BJSConfig cfg_;
  Cache cache_;
};

}  // namespace fff

#endif  // FFF_SAMPLERS_HPP
