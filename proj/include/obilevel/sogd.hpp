#ifndef OBILEVEL_SOGD_HPP
#define OBILEVEL_SOGD_HPP

#include <span>

#include "obilevel/problems.hpp"
#include "obilevel/schedules.hpp"
#include "obilevel/vec.hpp"

namespace obilevel {

struct TriState {
  Vec x, y, v;
};

// Memory of the variance-reduced recursions: previous directions and the
// previous iterate triple. Before round 2 the corrections are disabled.
struct MomentumState {
  Vec d_y, d_v, d_x;
  TriState prev;
  bool initialized = false;
};

// Momentum recursion shared by the first- and zeroth-order directions:
//   d = raw(z_t) + (1 - w)(d_prev - raw(z_prev)).
// At round 1 (mem not initialized) the raw direction is returned as-is.
template <class RawFn>
Vec variance_reduced_direction(RawFn&& raw, const TriState& cur, const MomentumState& mem,
                               const Vec& d_prev, double weight) {
  Vec at_cur = raw(cur);
  if (!mem.initialized || weight >= 1.0) return at_cur;
  return at_cur + (1.0 - weight) * (d_prev - raw(mem.prev));
}

// Directions d = raw(z_t) + (1 - w)(d_prev - raw(z_prev)), evaluated on one
// shared batch per source so the correlated noise cancels. The correction at
// the previous point uses the full previous triple (x, y, v).
Vec direction_y(const BilevelOracle& oracle, const Batch& g_batch, const TriState& cur,
                const MomentumState& mem, double gamma_t);
Vec direction_v(const BilevelOracle& oracle, const Batch& f_batch, const Batch& g_batch,
                const TriState& cur, const MomentumState& mem, double lambda_t);
Vec direction_x(const BilevelOracle& oracle, const Batch& f_batch, const Batch& g_batch,
                const TriState& cur, const MomentumState& mem, double eta_t);

struct SogdConfig {
  FeasibleSet leader_set = Unconstrained{1};
  double radius_p = 1.0;
};

// One simultaneous update of (y, v, x): all three directions come from the
// same pre-update state, then
//   y <- y - beta d_y,  v <- ball-project(v - delta d_v),  x <- project(x - alpha d_x).
void sogd_step(const BilevelOracle& oracle, const RoundContext& ctx, const ScheduleEntry& sched,
               const SogdConfig& cfg, TriState& state, MomentumState& mem);

// Guard shared by all optimizers: rejects non-finite or absurdly large
// directions instead of letting the iterates overflow.
void check_direction(const Vec& d, long t, const char* name);

// Exponentially window-smoothed gradient, two equivalent routes:
// the explicit sum  sum_j eta (1-eta)^(t-j) grad_j  (grads[0] is round 1)
// and the recursion d_t = eta grad_t + (1-eta) d_{t-1} with d_1 = eta grad_1.
Vec window_smoothed_gradient(std::span<const Vec> grads, double eta);
Vec ema_recursion(const Vec& prev_d, const Vec& grad, double eta);

}  // namespace obilevel

#endif
