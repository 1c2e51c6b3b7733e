#include "obilevel/sogd.hpp"

#include <cmath>
#include <sstream>

namespace obilevel {

namespace {

constexpr double kDivergenceNorm = 1e12;

void check_weight(double w, const char* name) {
  if (!(w > 0.0) || w > 1.0) {
    std::ostringstream os;
    os << name << " must lie in (0, 1]";
    fail(Errc::invalid_config, os.str());
  }
}

}  // namespace

void check_direction(const Vec& d, long t, const char* name) {
  if (!d.allFinite()) {
    std::ostringstream os;
    os << "non-finite " << name << " direction at round " << t;
    fail(Errc::divergence, os.str());
  }
  if (d.norm() > kDivergenceNorm) {
    std::ostringstream os;
    os << name << " direction norm exceeded " << kDivergenceNorm << " at round " << t;
    fail(Errc::divergence, os.str());
  }
}

Vec direction_y(const BilevelOracle& oracle, const Batch& g_batch, const TriState& cur,
                const MomentumState& mem, double gamma_t) {
  check_weight(gamma_t, "gamma");
  auto raw = [&](const TriState& z) -> Vec { return oracle.g_grad_y_avg(g_batch, z.x, z.y); };
  return variance_reduced_direction(raw, cur, mem, mem.d_y, gamma_t);
}

Vec direction_v(const BilevelOracle& oracle, const Batch& f_batch, const Batch& g_batch,
                const TriState& cur, const MomentumState& mem, double lambda_t) {
  check_weight(lambda_t, "lambda");
  auto raw = [&](const TriState& z) -> Vec {
    return oracle.f_grad_y_avg(f_batch, z.x, z.y) +
           oracle.g_hess_yy_vec_avg(g_batch, z.x, z.y, z.v);
  };
  return variance_reduced_direction(raw, cur, mem, mem.d_v, lambda_t);
}

Vec direction_x(const BilevelOracle& oracle, const Batch& f_batch, const Batch& g_batch,
                const TriState& cur, const MomentumState& mem, double eta_t) {
  check_weight(eta_t, "eta");
  auto raw = [&](const TriState& z) -> Vec {
    return oracle.f_grad_x_avg(f_batch, z.x, z.y) +
           oracle.g_jac_xy_vec_avg(g_batch, z.x, z.y, z.v);
  };
  return variance_reduced_direction(raw, cur, mem, mem.d_x, eta_t);
}

void sogd_step(const BilevelOracle& oracle, const RoundContext& ctx, const ScheduleEntry& sched,
               const SogdConfig& cfg, TriState& state, MomentumState& mem) {
  if (!(sched.alpha > 0) || !(sched.beta > 0) || !(sched.delta > 0))
    fail(Errc::invalid_config, "step sizes must be positive");
  Batch fb = oracle.draw_batch(ctx, Source::f, sched.b, 0, false, false);
  Batch gb = oracle.draw_batch(ctx, Source::g, sched.bbar, 0, false, true);

  Vec dy = direction_y(oracle, gb, state, mem, sched.gamma);
  Vec dv = direction_v(oracle, fb, gb, state, mem, sched.lambda);
  Vec dx = direction_x(oracle, fb, gb, state, mem, sched.eta);
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

Vec window_smoothed_gradient(std::span<const Vec> grads, double eta) {
  if (grads.empty()) fail(Errc::invalid_config, "empty gradient history");
  if (!(eta > 0.0) || !(eta < 1.0)) fail(Errc::invalid_config, "eta must lie in (0, 1)");
  const std::size_t t = grads.size();
  Vec acc = Vec::Zero(grads[0].size());
  for (std::size_t j = 0; j < t; ++j)
    acc += eta * std::pow(1.0 - eta, static_cast<double>(t - 1 - j)) * grads[j];
  return acc;
}

Vec ema_recursion(const Vec& prev_d, const Vec& grad, double eta) {
  if (!(eta > 0.0) || !(eta < 1.0)) fail(Errc::invalid_config, "eta must lie in (0, 1)");
  return eta * grad + (1.0 - eta) * prev_d;
}

}  // namespace obilevel
