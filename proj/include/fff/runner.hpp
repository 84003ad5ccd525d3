#ifndef FFF_RUNNER_HPP
#define FFF_RUNNER_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "fff/leapfrog.hpp"
#include "fff/mjp.hpp"
#include "fff/rng.hpp"
#include "fff/state.hpp"
#include "fff/thinner.hpp"

namespace fff {

struct Budget {
  enum class Kind { GradEvals, Jumps };
  Kind kind = Kind::Jumps;
  std::int64_t limit = 0;
};

struct RunOptions {
  Budget budget;
  std::optional<double> stride;    // explicit grid stride
  std::int64_t n_samples = 10000;  // target sample count when stride is unset
  bool store_records = false;
  Eigen::VectorXd initial_q;  // empty: zero vector
};

struct EventCounters {
  std::int64_t jumps = 0;
  std::int64_t bounces = 0;
  std::int64_t flips = 0;
  std::int64_t refreshes = 0;

  std::int64_t moves() const { return jumps + bounces + flips; }
  std::int64_t total() const { return moves() + refreshes; }
};

struct RunResult {
  std::vector<JumpRecord> records;  // only when store_records
  Eigen::MatrixXd samples;          // positions at grid times, row per sample
  double stride = 0.0;
  EventCounters counters;
  std::int64_t n_jumps = 0;  // embedded-chain transitions taken
  std::int64_t grad_evals = 0;
  std::int64_t value_evals = 0;
  std::int64_t divergences = 0;  // discrete-time baseline only
  double total_time = 0.0;       // process time at termination
  // Ratio-estimator accumulators over the embedded chain (empty for the
  // discrete-time baseline).
  Eigen::VectorXd rb_mean;
  Eigen::VectorXd rb_second_moment;
  double wall_time_s = 0.0;
};

namespace detail {

inline Eigen::VectorXd initial_position(const RunOptions& opts,
                                        Eigen::Index d) {
  if (opts.initial_q.size() == 0) return Eigen::VectorXd::Zero(d);
  if (opts.initial_q.size() != d)
    throw std::invalid_argument("initial_q has dimension " +
                                std::to_string(opts.initial_q.size()) +
                                ", target has " + std::to_string(d));
  return opts.initial_q;
}

inline bool budget_exhausted(const Budget& b, std::int64_t grad_evals,
                             std::int64_t n_jumps) {
  return b.kind == Budget::Kind::GradEvals ? grad_evals >= b.limit
                                           : n_jumps >= b.limit;
}

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

}  // namespace detail

/// Gillespie loop over a jump dynamics until the budget is exhausted.
/// Per step: menu, budget check, holding time and event draw, grid sampling
/// over the holding interval, ratio-estimator accumulation, then the event.
/// A gradient budget stops at the first jump whose cumulative gradient count
/// meets the limit; the final partial holding segment emits no samples.
template <typename Dynamics>
RunResult run_jump_sampler(Dynamics& dyn, CountingTarget& target,
                           RngStream& rng, const RunOptions& opts) {
  detail::WallClock clock;
  const Eigen::Index d = target.dim();
  RunResult out;

  LiftedState state{detail::initial_position(opts, d), rng.normal_vector(d)};
  dyn.reset();

  Eigen::VectorXd rb_num = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd rb_num_sq = Eigen::VectorXd::Zero(d);
  double rb_den = 0.0;

  std::optional<GridThinner> thinner;
  if (opts.stride) thinner.emplace(*opts.stride, 0, d);

  while (!detail::budget_exhausted(opts.budget, target.grad_evals(),
                                   out.n_jumps)) {
    RateMenu menu;
    GillespieDraw draw;
    try {
      menu = dyn.menu(state, target);
      draw = gillespie_step(menu, rng);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " (at jump " +
                             std::to_string(out.n_jumps) + ")",
                         out.n_jumps);
    }

    if (!thinner) {
      // Auto stride: start well below the local mean holding time; the
      // thinner doubles it as the run grows.
      thinner.emplace(1.0 / (64.0 * menu.total_rate()), 2 * opts.n_samples, d);
    }
    thinner->offer(state.q, draw.holding_time);

    const double w = 1.0 / menu.total_rate();
    rb_num += w * state.q;
    rb_num_sq += w * state.q.array().square().matrix();
    rb_den += w;

    if (opts.store_records)
      out.records.push_back({out.n_jumps, state, menu.total_rate(), draw.kind,
                             target.grad_evals()});

    switch (draw.kind) {
      case EventKind::Jump: ++out.counters.jumps; break;
      case EventKind::Bounce: ++out.counters.bounces; break;
      case EventKind::Flip: ++out.counters.flips; break;
      case EventKind::Refresh: ++out.counters.refreshes; break;
    }

    try {
      state = dyn.apply(state, draw.kind, rng, target);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " (at jump " +
                             std::to_string(out.n_jumps) + ")",
                         out.n_jumps);
    }
    out.total_time += draw.holding_time;
    ++out.n_jumps;
  }

  if (thinner) {
    out.samples = thinner->to_matrix();
    out.stride = thinner->stride();
  } else {
    out.samples.resize(0, d);
  }
  out.grad_evals = target.grad_evals();
  out.value_evals = target.value_evals();
  if (rb_den > 0.0) {
    out.rb_mean = rb_num / rb_den;
    out.rb_second_moment = rb_num_sq / rb_den;
  }
  out.wall_time_s = clock.seconds();
  return out;
}

}  // namespace fff

#endif  // FFF_RUNNER_HPP
