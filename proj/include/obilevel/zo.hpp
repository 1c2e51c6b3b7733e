#ifndef OBILEVEL_ZO_HPP
#define OBILEVEL_ZO_HPP

#include <span>
#include <utility>

#include "obilevel/problems.hpp"
#include "obilevel/vec.hpp"

namespace obilevel {

struct SmoothingRadii {
  double rho_s = 0;
  double rho_r = 0;
  double rho_v = 0;
};

// Symmetric two-point gradient estimator along per-sample unit directions:
//   (d / (2 n rho)) sum_i (value(i, base + rho u_i) - value(i, base - rho u_i)) u_i.
// `value` must evaluate sample i of one fixed batch at the given point so the
// same realized sample backs both endpoints.
template <class ValueFn>
Vec two_point_gradient(int n, std::span<const Vec> dirs, const Vec& base, double rho,
                       ValueFn&& value) {
  if (n < 1 || static_cast<int>(dirs.size()) < n)
    fail(Errc::invalid_config, "two-point estimator needs one direction per sample");
  if (!(rho > 0)) fail(Errc::invalid_config, "smoothing radius must be positive");
  const Index d = base.size();
  Vec acc = Vec::Zero(d);
  for (int i = 0; i < n; ++i) {
    const Vec& u = dirs[i];
    double diff = value(i, base + rho * u) - value(i, base - rho * u);
    acc += diff * u;
  }
  return acc * (static_cast<double>(d) / (2.0 * n * rho));
}

// Central difference of per-sample gradient estimates along v:
//   (1 / (2 n rho_v)) sum_i (grad(i, y + rho_v v) - grad(i, y - rho_v v)).
template <class GradFn>
Vec gradient_difference_vec(int n, Index out_dim, const Vec& y, const Vec& v, double rho_v,
                            GradFn&& grad) {
  if (n < 1) fail(Errc::invalid_config, "estimator needs at least one sample");
  if (!(rho_v > 0)) fail(Errc::invalid_config, "smoothing radius must be positive");
  Vec acc = Vec::Zero(out_dim);
  for (int i = 0; i < n; ++i) acc += grad(i, y + rho_v * v) - grad(i, y - rho_v * v);
  return acc / (2.0 * n * rho_v);
}

// Function-value-only estimators of the partial gradients. Only f_value /
// g_value oracle queries are issued.
Vec zo_grad_y_g(const BilevelOracle& oracle, const Batch& g_batch, const Vec& x, const Vec& y,
                double rho_r);
Vec zo_grad_x_g(const BilevelOracle& oracle, const Batch& g_batch, const Vec& x, const Vec& y,
                double rho_s);
Vec zo_grad_y_f(const BilevelOracle& oracle, const Batch& f_batch, const Vec& x, const Vec& y,
                double rho_r);
Vec zo_grad_x_f(const BilevelOracle& oracle, const Batch& f_batch, const Vec& x, const Vec& y,
                double rho_s);

// Hessian- and Jacobian-vector products as differences of the estimators
// above at y +- rho_v v. Each sample reuses one direction for all four of its
// value queries.
Vec zo_hess_yy_vec(const BilevelOracle& oracle, const Batch& g_batch, const Vec& x,
                   const Vec& y, const Vec& v, double rho_v, double rho_r);
Vec zo_jac_xy_vec(const BilevelOracle& oracle, const Batch& g_batch, const Vec& x, const Vec& y,
                  const Vec& v, double rho_v, double rho_s);

// Worst-case gap between an L-smooth objective and its smoothed counterpart:
// ell_g1 (rho_s^2 + rho_r^2) / 2.
double smoothed_value_gap_bound(double ell_g1, const SmoothingRadii& radii);

// Gap bound between the gradients of the smoothed and original objectives:
// ell (rho_s d1 + rho_r d2) / 2.
double smoothed_gradient_gap_bound(double ell, double rho_s, Index d1, double rho_r, Index d2);

// Squared-distance bound between the smoothed and original inner solutions:
// ell_g1 (rho_s^2 + rho_r^2) / mu_g.
double smoothed_argmin_gap_bound(double ell_g1, double mu_g, const SmoothingRadii& radii);

}  // namespace obilevel

#endif
