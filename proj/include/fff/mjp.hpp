#ifndef FFF_MJP_HPP
#define FFF_MJP_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fff/rng.hpp"
#include "fff/state.hpp"

namespace fff {

/// The closed set of events the implemented samplers can emit.
enum class EventKind {
  Jump,     // deterministic-map jump (leapfrog trajectory or linear step)
  Bounce,   // gradient reflection
  Flip,     // momentum sign flip
  Refresh,  // momentum redraw
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Jump: return "jump";
    case EventKind::Bounce: return "bounce";
    case EventKind::Flip: return "flip";
    case EventKind::Refresh: return "refresh";
  }
  return "?";
}

struct RateEntry {
  EventKind kind;
  double rate;
};

/// Per-state list of competing event rates feeding one Gillespie draw.
class RateMenu {
 public:
  RateMenu() = default;

  void add(EventKind kind, double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate))
      throw std::runtime_error(std::string("RateMenu: rate for event '") +
                               to_string(kind) + "' is " +
                               std::to_string(rate));
    entries_.push_back({kind, rate});
    total_ += rate;
  }

  const std::vector<RateEntry>& entries() const { return entries_; }
  double total_rate() const { return total_; }

  double rate_of(EventKind kind) const {
    double r = 0.0;
    for (const auto& e : entries_)
      if (e.kind == kind) r += e.rate;
    return r;
  }

 private:
  std::vector<RateEntry> entries_;
  double total_ = 0.0;
};

struct GillespieDraw {
  double holding_time;
  std::size_t entry_index;
  EventKind kind;
};

/// One Doob-Gillespie step: Exponential(total rate) holding time, then event
/// selection proportional to rate. Draw order is fixed (time first, then
/// selector); entries with rate exactly 0 are never selected, and a selector
/// landing exactly on a cumulative-sum boundary resolves to the earlier entry.
inline GillespieDraw gillespie_step(const RateMenu& menu, RngStream& rng) {
  const double total = menu.total_rate();
  if (!std::isfinite(total))
    throw std::runtime_error("gillespie_step: non-finite total rate");
  if (total <= 0.0)
    throw std::runtime_error("gillespie_step: absorbing state (total rate 0)");

  const double holding_time = rng.exponential(total);
  const double threshold = rng.uniform01() * total;

  double cum = 0.0;
  const auto& entries = menu.entries();
  std::size_t last_positive = entries.size();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].rate <= 0.0) continue;
    cum += entries[i].rate;
    last_positive = i;
    if (threshold <= cum) return {holding_time, i, entries[i].kind};
  }
  // Rounding in the cumulative sum can leave threshold slightly above cum.
  return {holding_time, last_positive, entries[last_positive].kind};
}

/// One entry of the embedded chain. Holding times are not stored; the total
/// rate at the state is all the ergodic-average estimator needs.
struct JumpRecord {
  std::int64_t jump_index;
  LiftedState state;
  double total_rate;
  EventKind event;  // event taken to leave this state
  std::int64_t grad_evals_so_far;
};

/// Rao-Blackwellized ergodic average over the embedded chain: holding times
/// are replaced by their expectations 1/rate, giving the ratio estimator
/// (sum f(Z_n)/rate_n) / (sum 1/rate_n).
template <typename F>
double rao_blackwell_average(const std::vector<JumpRecord>& records, F&& f) {
  if (records.empty())
    throw std::invalid_argument("rao_blackwell_average: no records");
  double num = 0.0, den = 0.0;
  for (const auto& r : records) {
    if (!(r.total_rate > 0.0))
      throw std::invalid_argument(
          "rao_blackwell_average: non-positive rate at jump " +
          std::to_string(r.jump_index));
    const double w = 1.0 / r.total_rate;
    num += f(r.state) * w;
    den += w;
  }
  return num / den;
}

using KernelEvaluator = std::function<RateMenu(const LiftedState&)>;

/// Superposition of rate kernels: menus concatenate, total rates add.
inline KernelEvaluator superpose(std::vector<KernelEvaluator> kernels) {
  if (kernels.empty())
    throw std::invalid_argument("superpose: empty kernel list");
  return [ks = std::move(kernels)](const LiftedState& a) {
    RateMenu combined;
    for (const auto& k : ks)
      for (const auto& e : k(a).entries()) combined.add(e.kind, e.rate);
    return combined;
  };
}

}  // namespace fff

#endif  // FFF_MJP_HPP
