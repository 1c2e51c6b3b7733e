#include "obilevel/zo.hpp"

namespace obilevel {

Vec zo_grad_y_g(const BilevelOracle& oracle, const Batch& g_batch, const Vec& x, const Vec& y,
                double rho_r) {
  return two_point_gradient(g_batch.size, g_batch.dir_r, y, rho_r,
                            [&](int i, const Vec& yp) { return oracle.g_value(g_batch, i, x, yp); });
}

Vec zo_grad_x_g(const BilevelOracle& oracle, const Batch& g_batch, const Vec& x, const Vec& y,
                double rho_s) {
  return two_point_gradient(g_batch.size, g_batch.dir_s, x, rho_s,
                            [&](int i, const Vec& xp) { return oracle.g_value(g_batch, i, xp, y); });
}

Vec zo_grad_y_f(const BilevelOracle& oracle, const Batch& f_batch, const Vec& x, const Vec& y,
                double rho_r) {
  return two_point_gradient(f_batch.size, f_batch.dir_r, y, rho_r,
                            [&](int i, const Vec& yp) { return oracle.f_value(f_batch, i, x, yp); });
}

Vec zo_grad_x_f(const BilevelOracle& oracle, const Batch& f_batch, const Vec& x, const Vec& y,
                double rho_s) {
  return two_point_gradient(f_batch.size, f_batch.dir_s, x, rho_s,
                            [&](int i, const Vec& xp) { return oracle.f_value(f_batch, i, xp, y); });
}

Vec zo_hess_yy_vec(const BilevelOracle& oracle, const Batch& g_batch, const Vec& x,
                   const Vec& y, const Vec& v, double rho_v, double rho_r) {
  const Index d2 = oracle.dim_y();
  auto inner_grad = [&](int i, const Vec& yp) -> Vec {
    const Vec& r = g_batch.dir_r[i];
    double diff = oracle.g_value(g_batch, i, x, yp + rho_r * r) -
                  oracle.g_value(g_batch, i, x, yp - rho_r * r);
    return (static_cast<double>(d2) / (2.0 * rho_r)) * diff * r;
  };
  return gradient_difference_vec(g_batch.size, d2, y, v, rho_v, inner_grad);
}

Vec zo_jac_xy_vec(const BilevelOracle& oracle, const Batch& g_batch, const Vec& x, const Vec& y,
                  const Vec& v, double rho_v, double rho_s) {
  const Index d1 = oracle.dim_x();
  auto inner_grad = [&](int i, const Vec& yp) -> Vec {
    const Vec& s = g_batch.dir_s[i];
    double diff = oracle.g_value(g_batch, i, x + rho_s * s, yp) -
                  oracle.g_value(g_batch, i, x - rho_s * s, yp);
    return (static_cast<double>(d1) / (2.0 * rho_s)) * diff * s;
  };
  return gradient_difference_vec(g_batch.size, d1, y, v, rho_v, inner_grad);
}

double smoothed_value_gap_bound(double ell_g1, const SmoothingRadii& radii) {
  if (!(ell_g1 > 0) || radii.rho_s < 0 || radii.rho_r < 0)
    fail(Errc::invalid_config, "gap bound needs a positive constant and nonnegative radii");
  return ell_g1 * (radii.rho_s * radii.rho_s + radii.rho_r * radii.rho_r) / 2.0;
}

double smoothed_gradient_gap_bound(double ell, double rho_s, Index d1, double rho_r, Index d2) {
  return ell * (rho_s * static_cast<double>(d1) + rho_r * static_cast<double>(d2)) / 2.0;
}

double smoothed_argmin_gap_bound(double ell_g1, double mu_g, const SmoothingRadii& radii) {
  if (!(mu_g > 0)) fail(Errc::invalid_config, "argmin gap bound needs mu_g > 0");
  return ell_g1 * (radii.rho_s * radii.rho_s + radii.rho_r * radii.rho_r) / mu_g;
}

}  // namespace obilevel
