#ifndef OBILEVEL_METRICS_HPP
#define OBILEVEL_METRICS_HPP

#include <span>
#include <vector>

#include "obilevel/problems.hpp"
#include "obilevel/vec.hpp"

namespace obilevel {

// Grid used to approximate sup_x terms when an instance provides no closed
// form. y-sups run over a symmetric box of half-width y_half_width.
struct GridSpec {
  int points_per_dim = 129;
  double y_half_width = 2.0;
  bool force_grid = false;  // ignore instance closed forms (testing hook)
};

struct RoundRecord {
  double blreg_summand = 0;
  double blreg_cum = 0;
  double V_cum = 0;
  double H2_cum = 0;
  double D_cum = 0;
  double G_cum = 0;
  double y_err = 0;
  double v_err = 0;
};

// Accumulates the local-regret summands and every drift functional. The
// regret summand is always computed from the exact hypergradient at the
// iterate, never from the algorithm's own direction.
class RegretLedger {
 public:
  explicit RegretLedger(GridSpec grid = {});

  // Record round t at the pre-update iterate (x, y, v); alpha is the round's
  // leader step, rho_v the round's Hessian-probe radius (0 for first order).
  RoundRecord record_round(const BilevelOracle& oracle, long t, const Vec& x, const Vec& y,
                           const Vec& v, double alpha, double rho_v = 0.0);

  double blreg() const { return blreg_; }
  double V() const { return V_; }
  double H2() const { return H2_; }
  double Dx() const { return Dx_; }
  double Dy() const { return Dy_; }
  double D() const { return Dx_ + Dy_; }
  double Gy() const { return Gy_; }
  double Gyy() const { return Gyy_; }
  double Gxy() const { return Gxy_; }
  double G() const { return Gy_ + Gyy_ + Gxy_; }
  double Gv() const { return Gv_; }
  double Gx() const { return Gx_; }
  double e1() const { return e1_; }
  double delta_T() const { return e1_ + V_; }
  double psi_T() const { return H2_ + G() + D(); }

  const std::vector<double>& summand_trace() const { return summands_; }
  const std::vector<double>& blreg_cum_trace() const { return cumulative_; }

 private:
  GridSpec grid_;
  long last_t_ = 0;
  double blreg_ = 0, V_ = 0, H2_ = 0, Dx_ = 0, Dy_ = 0;
  double Gy_ = 0, Gyy_ = 0, Gxy_ = 0, Gv_ = 0, Gx_ = 0;
  double e1_ = 0;
  std::vector<double> summands_, cumulative_;
  struct Snapshot {
    Vec x, y, v;
    double rho_v = 0;
    bool valid = false;
  } prev_;
};

// sum_{t=2..T} sup_x ||y*_{t-1}(x) - y*_t(x)||^2, closed form when the
// instance provides one, grid maximization otherwise.
double h2_path_length(const BilevelOracle& oracle, long T, const GridSpec& grid = {});

// Least-squares slope of log(cumulative regret) against log(t) over the last
// decade of rounds. An all-zero trace sets *degenerate and returns 0.
double regret_exponent(std::span<const double> blreg_cum, bool* degenerate = nullptr);

// Recompute the cumulative regret from a stored iterate trace; the ledger's
// value must match this exactly (measurement is separate from optimization).
double recompute_blreg(const BilevelOracle& oracle, std::span<const Vec> x_trace,
                       std::span<const double> alphas);

// Enumerate the grid over a bounded leader set (points_per_dim per axis).
std::vector<Vec> leader_grid(const FeasibleSet& set, int points_per_dim);

}  // namespace obilevel

#endif
