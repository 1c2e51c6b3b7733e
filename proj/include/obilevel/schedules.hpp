#ifndef OBILEVEL_SCHEDULES_HPP
#define OBILEVEL_SCHEDULES_HPP

#include <cstdint>
#include <vector>

#include "obilevel/errors.hpp"

namespace obilevel {

// Declared regularity constants of a problem instance: strong-convexity
// modulus of the inner objective and the Lipschitz moduli of values,
// gradients and Hessians.
struct SmoothnessProfile {
  double mu_g = 1.0;
  double ell_f0 = 1.0;
  double ell_f1 = 1.0;
  double ell_g1 = 1.0;
  double ell_g2 = 0.0;

  void validate() const;
};

// First-order constant ledger. Evaluation order: the Lipschitz aggregates
// first, then c_beta/c_delta, then the Lyapunov weights, then the momentum
// constants and the offset c.
struct ConstantLedger {
  double M_f = 0, M_v = 0;
  double L_y = 0, L_v = 0, L_f = 0;
  double L_mug = 0;        // mu_g l_g1 / (mu_g + l_g1)
  double L_mug_acute = 0;  // (l_g1 + l_g1^3) mu_g / (mu_g + l_g1)
  double nu = 0;           // l_f1 + l_g2 l_f0 / mu_g
  double radius_p = 0;     // l_f0 / mu_g
  double c_beta = 0, c_delta = 0;
  double Gamma = 0, Upsilon = 0, Phi = 0, Psi = 0, Omega = 0;
  double c_gamma = 0, c_eta = 0, c_lambda = 0;
  double c = 0;
};

ConstantLedger derived_constants(const SmoothnessProfile& profile);

// Zeroth-order counterpart; the weights pick up the dimensions of the two
// decision spaces.
struct ZoConstantLedger {
  double M_f = 0;
  double L_y = 0, L_f = 0;
  double L_mug = 0;
  double nu = 0;
  double radius_p = 0;
  double c_beta = 0, c_delta = 0;
  double Gamma = 0, Upsilon = 0, Phi = 0, Psi = 0, Omega = 0;
  double c_v = 0;
  double c_gamma = 0, c_eta = 0, c_lambda = 0;
  double c = 0;
};

ZoConstantLedger derived_constants_zo(const SmoothnessProfile& profile, int d1, int d2);

// Everything an optimizer consumes at round t. First-order schedules carry
// zero smoothing radii and unit batches.
struct ScheduleEntry {
  double alpha = 0, beta = 0, delta = 0;
  double gamma = 1, lambda = 1, eta = 1;  // momentum weights in (0, 1]
  double rho_s = 0, rho_r = 0, rho_v = 0;
  int b = 1, bbar = 1;
  double p = 0;
};

struct ManualConstants {
  double c = 2.0;
  double c_beta = 1.0;
  double c_delta = 1.0;
  double c_gamma = 1.0;
  double c_eta = 1.0;
  double c_lambda = 1.0;
  double c_v = 1.0;  // zeroth-order only
  double p = 1.0;
};

class Schedule {
 public:
  // alpha_t = (c + t)^(-1/3), beta/delta proportional, weights quadratic in
  // alpha, unit batches.
  static Schedule first_order(const ManualConstants& k, long horizon);
  static Schedule first_order_theory(const SmoothnessProfile& profile, long horizon);

  // alpha_t = (d1 + d2)^(-3/4) (c + t)^(-1/3), weights linear in alpha,
  // rho_v^2 = c_v alpha_t, fixed rho_r/rho_s, batches from the horizon.
  static Schedule zeroth_order(const ManualConstants& k, long horizon, int d1, int d2);
  static Schedule zeroth_order_theory(const SmoothnessProfile& profile, long horizon, int d1,
                                      int d2);

  ScheduleEntry at(long t) const;

  long horizon() const { return horizon_; }
  double offset_c() const { return c_; }
  bool is_zeroth_order() const { return zeroth_order_; }
  // How many momentum weights were clamped down to 1 during construction
  // checks; theory constants routinely exceed 1 at small t.
  long clamp_count() const { return clamp_count_; }

 private:
  Schedule() = default;
  void check_and_count();

  bool zeroth_order_ = false;
  long horizon_ = 0;
  int d1_ = 0, d2_ = 0;
  double c_ = 0;
  double c_beta_ = 0, c_delta_ = 0;
  double c_gamma_ = 0, c_eta_ = 0, c_lambda_ = 0;
  double c_v_ = 0;
  double p_ = 0;
  double rho_r_ = 0, rho_s_ = 0;
  int b_ = 1, bbar_ = 1;
  long clamp_count_ = 0;
};

}  // namespace obilevel

#endif
