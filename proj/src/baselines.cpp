#include "obilevel/baselines.hpp"

#include "obilevel/sogd.hpp"

namespace obilevel {

Vec ogd_step(const BilevelOracle& oracle, long t, const Vec& x, double alpha) {
  if (!(alpha > 0)) fail(Errc::invalid_config, "step size must be positive");
  Vec grad = ground_truth_hypergradient(oracle, t, x);
  check_direction(grad, t, "hypergradient");
  return project(oracle.leader_set(), x - alpha * grad);
}

Vec ema_ogd_step(const BilevelOracle& oracle, long t, const Vec& x, EmaState& state,
                 double alpha, double eta) {
  if (!(alpha > 0)) fail(Errc::invalid_config, "step size must be positive");
  if (!(eta > 0) || eta > 1.0) fail(Errc::invalid_config, "eta must lie in (0, 1]");
  Vec grad = ground_truth_hypergradient(oracle, t, x);
  check_direction(grad, t, "hypergradient");
  Vec d = eta * grad;
  if (state.initialized) d += (1.0 - eta) * state.d;
  state.d = d;
  state.initialized = true;
  return project(oracle.leader_set(), x - alpha * d);
}

}  // namespace obilevel
