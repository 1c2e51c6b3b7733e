#include "obilevel/schedules.hpp"

#include <algorithm>
#include <cmath>

namespace obilevel {

namespace {

double clamp_weight(double w, long* count) {
  if (w > 1.0) {
    if (count) ++(*count);
    return 1.0;
  }
  return w;
}

}  // namespace

void SmoothnessProfile::validate() const {
  if (!(mu_g > 0) || !(ell_f0 > 0) || !(ell_f1 > 0) || !(ell_g1 > 0) || ell_g2 < 0)
    fail(Errc::invalid_config, "smoothness profile constants must be positive");
  if (ell_g1 < mu_g)
    fail(Errc::invalid_config, "smoothness profile requires ell_g1 >= mu_g");
}

ConstantLedger derived_constants(const SmoothnessProfile& pr) {
  pr.validate();
  ConstantLedger k;
  const double mu = pr.mu_g, lf0 = pr.ell_f0, lf1 = pr.ell_f1, lg1 = pr.ell_g1,
               lg2 = pr.ell_g2;
  k.nu = lf1 + lg2 * lf0 / mu;
  k.M_f = std::sqrt(2.0) * std::max(k.nu, lg1);
  k.M_v = std::sqrt(2.0) * std::max(lg2 * lf0 / mu + lf1, lg1);
  k.L_y = lg1 / mu;
  k.L_v = lf1 + lg1 * lf1 / mu + (lf0 / mu) * (lg2 + lg1 * lg2 / mu);
  k.L_f = lf1 + lg1 * (lf1 + k.M_f) / mu + (lf0 / mu) * (lg2 + lg1 * lg2 / mu);
  k.L_mug = mu * lg1 / (mu + lg1);
  k.L_mug_acute = (lg1 + lg1 * lg1 * lg1) * mu / (mu + lg1);
  k.radius_p = lf0 / mu;

  k.c_beta = std::sqrt(880.0) * k.L_y * k.M_f / k.L_mug;
  k.c_delta = std::sqrt(3520.0 * (1.0 + 2.0 * k.L_y * k.L_y)) * k.nu * k.M_f /
              (k.L_mug_acute * mu);

  k.Gamma = 11.0 * k.M_f * k.M_f / (k.L_mug * k.c_beta);
  k.Upsilon = 22.0 * k.M_f * k.M_f / (k.L_mug_acute * k.c_delta);

  const double Mf2 = k.M_f * k.M_f;
  const double curv = lg2 * lg2 * k.radius_p * k.radius_p + lf1 * lf1;
  k.Phi = std::max(480.0 * lg1 * lg1,
                   192.0 * lg1 * lg1 * (mu + lg1) * k.c_beta / k.Gamma);
  const double psi_a = 144.0 * curv * (10.0 + k.L_mug * k.L_mug * k.c_beta * k.c_beta / Mf2);
  const double psi_b = 288.0 * std::pow(lg1, 4) * k.c_delta * k.c_delta / Mf2;
  const double psi_c = 576.0 * curv * (mu + lg1) * k.c_beta / k.Gamma;
  k.Psi = std::max({psi_a, psi_b, psi_c,
                    576.0 * lg1 * lg1 * curv * k.c_delta * k.c_delta / Mf2});
  k.Omega = std::max({psi_a, psi_b, psi_c,
                      72.0 * lg1 * lg1 * k.L_mug_acute * k.L_mug_acute * k.c_delta *
                          k.c_delta / Mf2});

  const double hbar = 25.0 * Mf2 / (k.L_mug * k.L_mug);
  const double jmath = 90.0 * Mf2 / (k.L_mug_acute * k.L_mug_acute);
  k.c_gamma = 1.0 / (6.0 * k.L_f) + 48.0 * lg1 * lg1 * k.c_beta * k.c_beta + hbar * k.Phi;
  k.c_eta = 1.0 / (6.0 * k.L_f) + 5.0 * k.Omega;
  k.c_lambda = 1.0 / (6.0 * k.L_f) + 72.0 * lg1 * lg1 * k.c_delta * k.c_delta + jmath * k.Psi;

  k.c = std::max({4.0 * k.L_f, k.c_beta * (mu + lg1), 2.0});
  return k;
}

ZoConstantLedger derived_constants_zo(const SmoothnessProfile& pr, int d1, int d2) {
  pr.validate();
  if (d1 < 1 || d2 < 1) fail(Errc::invalid_config, "dimensions must be >= 1");
  ZoConstantLedger k;
  const double mu = pr.mu_g, lf0 = pr.ell_f0, lf1 = pr.ell_f1, lg1 = pr.ell_g1;
  const ConstantLedger fo = derived_constants(pr);
  k.M_f = fo.M_f;
  k.L_y = fo.L_y;
  k.L_f = fo.L_f;
  k.L_mug = fo.L_mug;
  k.nu = fo.nu;
  k.radius_p = lf0 / mu;

  k.c_beta = std::sqrt(1760.0) * k.L_y * k.M_f / k.L_mug;
  k.c_delta = std::sqrt(33280.0 * (1.0 + 2.0 * k.L_y * k.L_y)) * k.nu * k.M_f / (k.L_mug * mu);

  const double Mf2 = k.M_f * k.M_f;
  k.Gamma = 11.0 * Mf2 / (k.L_mug * k.c_beta);
  k.Upsilon = 52.0 * Mf2 / (k.L_mug * k.c_delta);

  k.Phi = std::max(240.0 * d2 * lg1 * lg1 / k.L_f,
                   12.0 * d2 * lg1 * lg1 * k.L_mug * k.L_mug * k.c_beta * k.c_beta /
                       (k.L_f * Mf2));
  auto psi_like = [&](double d) {
    return std::max({720.0 * d * lf1 * lf1 / k.L_f,
                     27.0 * k.L_mug * lg1 * lg1 * d * k.c_delta / (k.Upsilon * k.L_f),
                     144.0 * d * lf1 * lf1 * (mu + lg1) * k.c_beta / (k.L_f * k.Gamma),
                     36.0 * lf1 * lf1 * d * k.L_mug * k.L_mug * k.c_beta * k.c_beta /
                         (k.L_f * Mf2)});
  };
  k.Psi = psi_like(d2);
  k.Omega = psi_like(d1);

  k.c_v = std::max({1080.0 * lg1 * lg1, 324.0 * std::pow(lg1, 4) * k.c_delta * k.c_delta / Mf2,
                    54.0 * k.L_mug * k.L_mug * lg1 * lg1 * k.c_beta * k.c_beta / Mf2,
                    216.0 * lg1 * lg1 * k.c_beta * (mu + lg1) / k.Gamma}) *
          (d2 / k.Psi + d1 / k.Omega);
  k.c_gamma = 26.0 * Mf2 * k.Phi / (k.L_mug * k.L_mug);
  k.c_eta = 26.0 * k.Omega;
  k.c_lambda = 10.0 * k.Upsilon * k.c_delta * k.Psi / k.L_mug;

  const double base = std::max({4.0 * k.L_f, k.c_beta * (mu + lg1),
                                48.0 * k.L_mug * k.L_mug * d2 * lg1 * lg1 * k.c_beta *
                                    k.c_beta / (Mf2 * k.Phi)});
  k.c = base * base * base + 1.0;
  return k;
}

Schedule Schedule::first_order(const ManualConstants& k, long horizon) {
  if (horizon < 1) fail(Errc::invalid_config, "schedule horizon must be >= 1");
  if (!(k.c > 0)) fail(Errc::invalid_config, "schedule offset c must be positive");
  if (!(k.c_beta > 0) || !(k.c_delta > 0) || !(k.c_gamma > 0) || !(k.c_eta > 0) ||
      !(k.c_lambda > 0))
    fail(Errc::invalid_config, "schedule constants must be positive");
  if (!(k.p > 0)) fail(Errc::invalid_config, "schedule radius p must be positive");
  Schedule s;
  s.zeroth_order_ = false;
  s.horizon_ = horizon;
  s.c_ = k.c;
  s.c_beta_ = k.c_beta;
  s.c_delta_ = k.c_delta;
  s.c_gamma_ = k.c_gamma;
  s.c_eta_ = k.c_eta;
  s.c_lambda_ = k.c_lambda;
  s.p_ = k.p;
  s.b_ = s.bbar_ = 1;
  s.check_and_count();
  return s;
}

Schedule Schedule::first_order_theory(const SmoothnessProfile& profile, long horizon) {
  ConstantLedger led = derived_constants(profile);
  ManualConstants k;
  // The analysis needs alpha_t <= 1/max{4 L_f, c_beta (mu_g + l_g1)} every
  // round; with alpha_t = (c + t)^(-1/3) that forces the cubed offset (the
  // zeroth-order ledger already cubes it).
  k.c = std::max(led.c * led.c * led.c + 1.0, 2.0);
  k.c_beta = led.c_beta;
  k.c_delta = led.c_delta;
  k.c_gamma = led.c_gamma;
  k.c_eta = led.c_eta;
  k.c_lambda = led.c_lambda;
  k.p = led.radius_p;
  return first_order(k, horizon);
}

Schedule Schedule::zeroth_order(const ManualConstants& k, long horizon, int d1, int d2) {
  if (horizon < 1) fail(Errc::invalid_config, "schedule horizon must be >= 1");
  if (d1 < 1 || d2 < 1) fail(Errc::invalid_config, "dimensions must be >= 1");
  if (!(k.c > 0)) fail(Errc::invalid_config, "schedule offset c must be positive");
  if (!(k.c_beta > 0) || !(k.c_delta > 0) || !(k.c_gamma > 0) || !(k.c_eta > 0) ||
      !(k.c_lambda > 0))
    fail(Errc::invalid_config, "schedule constants must be positive");
  if (!(k.c_v > 0)) fail(Errc::invalid_config, "smoothing constant c_v must be positive");
  if (!(k.p > 0)) fail(Errc::invalid_config, "schedule radius p must be positive");
  Schedule s;
  s.zeroth_order_ = true;
  s.horizon_ = horizon;
  s.d1_ = d1;
  s.d2_ = d2;
  s.c_ = k.c;
  s.c_beta_ = k.c_beta;
  s.c_delta_ = k.c_delta;
  s.c_gamma_ = k.c_gamma;
  s.c_eta_ = k.c_eta;
  s.c_lambda_ = k.c_lambda;
  s.c_v_ = k.c_v;
  s.p_ = k.p;
  const double T = static_cast<double>(horizon);
  s.rho_r_ = 1.0 / (d2 * std::sqrt(T));
  s.rho_s_ = 1.0 / (d1 * std::sqrt(T));
  const double dsum = static_cast<double>(d1 + d2);
  // Fractional batch sizes are rounded up; a batch is a positive integer.
  s.b_ = std::max(1L, static_cast<long>(std::ceil(std::cbrt(T) / std::pow(dsum, 1.5))));
  s.bbar_ = std::max(
      1L, static_cast<long>(std::ceil(std::pow(T, 2.0 / 3.0) / std::pow(dsum, 0.75))));
  s.check_and_count();
  return s;
}

Schedule Schedule::zeroth_order_theory(const SmoothnessProfile& profile, long horizon, int d1,
                                       int d2) {
  ZoConstantLedger led = derived_constants_zo(profile, d1, d2);
  ManualConstants k;
  k.c = led.c;
  k.c_beta = led.c_beta;
  k.c_delta = led.c_delta;
  k.c_gamma = led.c_gamma;
  k.c_eta = led.c_eta;
  k.c_lambda = led.c_lambda;
  k.c_v = led.c_v;
  k.p = led.radius_p;
  return zeroth_order(k, horizon, d1, d2);
}

ScheduleEntry Schedule::at(long t) const {
  if (t < 1 || t > horizon_) fail(Errc::invalid_config, "schedule round out of range");
  ScheduleEntry e;
  const double scale =
      zeroth_order_ ? std::pow(static_cast<double>(d1_ + d2_), 0.75) : 1.0;
  auto alpha_at = [&](long u) { return 1.0 / (scale * std::cbrt(c_ + static_cast<double>(u))); };
  e.alpha = alpha_at(t);
  e.beta = c_beta_ * e.alpha;
  e.delta = c_delta_ * e.alpha;
  if (t == 1) {
    // Round 1 uses raw directions; the recursion weight is immaterial.
    e.gamma = e.lambda = e.eta = 1.0;
  } else {
    const double a_prev = alpha_at(t - 1);
    const double pw = zeroth_order_ ? a_prev : a_prev * a_prev;
    e.gamma = clamp_weight(c_gamma_ * pw, nullptr);
    e.eta = clamp_weight(c_eta_ * pw, nullptr);
    e.lambda = clamp_weight(c_lambda_ * pw, nullptr);
  }
  if (zeroth_order_) {
    e.rho_r = rho_r_;
    e.rho_s = rho_s_;
    e.rho_v = std::sqrt(c_v_ * e.alpha);
  }
  e.b = static_cast<int>(b_);
  e.bbar = static_cast<int>(bbar_);
  e.p = p_;
  return e;
}

void Schedule::check_and_count() {
  clamp_count_ = 0;
  double prev_alpha = 0;
  const double scale =
      zeroth_order_ ? std::pow(static_cast<double>(d1_ + d2_), 0.75) : 1.0;
  for (long t = 1; t <= horizon_; ++t) {
    const double a = 1.0 / (scale * std::cbrt(c_ + static_cast<double>(t)));
    if (t > 1) {
      if (!(a < prev_alpha))
        fail(Errc::invalid_config, "step schedule is not strictly decreasing");
      const double pw = zeroth_order_ ? prev_alpha : prev_alpha * prev_alpha;
      for (double raw : {c_gamma_ * pw, c_eta_ * pw, c_lambda_ * pw}) {
        if (!(raw > 0)) fail(Errc::invalid_config, "momentum weight must be positive");
        clamp_weight(raw, &clamp_count_);
      }
    }
    prev_alpha = a;
  }
}

}  // namespace obilevel
