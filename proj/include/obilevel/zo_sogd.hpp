#ifndef OBILEVEL_ZO_SOGD_HPP
#define OBILEVEL_ZO_SOGD_HPP

#include "obilevel/sogd.hpp"
#include "obilevel/zo.hpp"

namespace obilevel {

// Function-value-only counterparts of the first-order directions: the raw
// directions are built from the two-point estimators, then pushed through the
// same momentum recursion, with the previous point evaluated on the same
// batch and with the previous v inside the Hessian-vector perturbation.
Vec zo_direction_y(const BilevelOracle& oracle, const Batch& g_batch, const TriState& cur,
                   const MomentumState& mem, double gamma_t, const SmoothingRadii& radii);
Vec zo_direction_v(const BilevelOracle& oracle, const Batch& f_batch, const Batch& g_batch,
                   const TriState& cur, const MomentumState& mem, double lambda_t,
                   const SmoothingRadii& radii);
Vec zo_direction_x(const BilevelOracle& oracle, const Batch& f_batch, const Batch& g_batch,
                   const TriState& cur, const MomentumState& mem, double eta_t,
                   const SmoothingRadii& radii);

// One simultaneous zeroth-order update; identical contract to sogd_step but
// every oracle access goes through f_value / g_value.
void zo_sogd_step(const BilevelOracle& oracle, const RoundContext& ctx,
                  const ScheduleEntry& sched, const SogdConfig& cfg, TriState& state,
                  MomentumState& mem);

}  // namespace obilevel

#endif
