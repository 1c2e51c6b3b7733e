#include "obilevel/zo_sogd.hpp"

namespace obilevel {

namespace {

void check_radii(const SmoothingRadii& radii) {
  if (!(radii.rho_r > 0) || !(radii.rho_s > 0) || !(radii.rho_v > 0))
    fail(Errc::invalid_config, "zeroth-order smoothing radii must be positive");
}

}  // namespace

Vec zo_direction_y(const BilevelOracle& oracle, const Batch& g_batch, const TriState& cur,
                   const MomentumState& mem, double gamma_t, const SmoothingRadii& radii) {
  check_radii(radii);
  auto raw = [&](const TriState& z) -> Vec {
    return zo_grad_y_g(oracle, g_batch, z.x, z.y, radii.rho_r);
  };
  return variance_reduced_direction(raw, cur, mem, mem.d_y, gamma_t);
}

Vec zo_direction_v(const BilevelOracle& oracle, const Batch& f_batch, const Batch& g_batch,
                   const TriState& cur, const MomentumState& mem, double lambda_t,
                   const SmoothingRadii& radii) {
  check_radii(radii);
  auto raw = [&](const TriState& z) -> Vec {
    return zo_grad_y_f(oracle, f_batch, z.x, z.y, radii.rho_r) +
           zo_hess_yy_vec(oracle, g_batch, z.x, z.y, z.v, radii.rho_v, radii.rho_r);
  };
  return variance_reduced_direction(raw, cur, mem, mem.d_v, lambda_t);
}

Vec zo_direction_x(const BilevelOracle& oracle, const Batch& f_batch, const Batch& g_batch,
                   const TriState& cur, const MomentumState& mem, double eta_t,
                   const SmoothingRadii& radii) {
  check_radii(radii);
  auto raw = [&](const TriState& z) -> Vec {
    return zo_grad_x_f(oracle, f_batch, z.x, z.y, radii.rho_s) +
           zo_jac_xy_vec(oracle, g_batch, z.x, z.y, z.v, radii.rho_v, radii.rho_s);
  };
  return variance_reduced_direction(raw, cur, mem, mem.d_x, eta_t);
}

void zo_sogd_step(const BilevelOracle& oracle, const RoundContext& ctx,
                  const ScheduleEntry& sched, const SogdConfig& cfg, TriState& state,
                  MomentumState& mem) {
  if (!(sched.alpha > 0) || !(sched.beta > 0) || !(sched.delta > 0))
    fail(Errc::invalid_config, "step sizes must be positive");
  SmoothingRadii radii{sched.rho_s, sched.rho_r, sched.rho_v};
  check_radii(radii);
  Batch fb = oracle.draw_batch(ctx, Source::f, sched.b, 0, true, false);
  Batch gb = oracle.draw_batch(ctx, Source::g, sched.bbar, 0, true, false);

  Vec dy = zo_direction_y(oracle, gb, state, mem, sched.gamma, radii);
  Vec dv = zo_direction_v(oracle, fb, gb, state, mem, sched.lambda, radii);
  Vec dx = zo_direction_x(oracle, fb, gb, state, mem, sched.eta, radii);
  check_direction(dy, ctx.t, "inner");
  check_direction(dv, ctx.t, "system");
  check_direction(dx, ctx.t, "outer");

  mem.prev = state;
  mem.d_y = dy;
  mem.d_v = dv;
  mem.d_x = dx;
  mem.initialized = true;

  state.y -= sched.beta * dy;
  state.v = project_ball(state.v - sched.delta * dv, cfg.radius_p);
  state.x = project(cfg.leader_set, state.x - sched.alpha * dx);
}

}  // namespace obilevel
