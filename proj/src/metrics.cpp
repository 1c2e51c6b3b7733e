#include "obilevel/metrics.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace obilevel {

namespace {

Eigen::MatrixXd reconstruct_hess(const BilevelOracle& o, long t, const Vec& x, const Vec& y) {
  const Index d2 = o.dim_y();
  Eigen::MatrixXd H(d2, d2);
  for (Index j = 0; j < d2; ++j) {
    Vec e = Vec::Zero(d2);
    e[j] = 1.0;
    H.col(j) = o.g_hess_yy_vec_pop(t, x, y, e);
  }
  return H;
}

Eigen::MatrixXd reconstruct_jac(const BilevelOracle& o, long t, const Vec& x, const Vec& y) {
  const Index d1 = o.dim_x(), d2 = o.dim_y();
  Eigen::MatrixXd J(d1, d2);
  for (Index j = 0; j < d2; ++j) {
    Vec e = Vec::Zero(d2);
    e[j] = 1.0;
    J.col(j) = o.g_jac_xy_vec_pop(t, x, y, e);
  }
  return J;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().maxCoeff();
}

std::vector<Vec> axis_grid_points(double lo, double hi, int n) {
  std::vector<Vec> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vec p(1);
    p[0] = (n == 1) ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

std::vector<Vec> leader_grid(const FeasibleSet& set, int points_per_dim) {
  if (points_per_dim < 2) fail(Errc::invalid_config, "grid needs at least two points per axis");
  const Box* box = std::get_if<Box>(&set);
  if (box == nullptr)
    fail(Errc::unsupported, "grid maximization needs a bounded box leader set");
  const Index d = box->lower.size();
  if (d > 2) fail(Errc::unsupported, "grid maximization supports at most two leader dimensions");
  if (d == 1) return axis_grid_points(box->lower[0], box->upper[0], points_per_dim);
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(points_per_dim) * points_per_dim);
  auto a0 = axis_grid_points(box->lower[0], box->upper[0], points_per_dim);
  auto a1 = axis_grid_points(box->lower[1], box->upper[1], points_per_dim);
  for (const Vec& u : a0)
    for (const Vec& w : a1) {
      Vec p(2);
      p[0] = u[0];
      p[1] = w[0];
      pts.push_back(p);
    }
  return pts;
}

RegretLedger::RegretLedger(GridSpec grid) : grid_(grid) {}

RoundRecord RegretLedger::record_round(const BilevelOracle& oracle, long t, const Vec& x,
                                       const Vec& y, const Vec& v, double alpha, double rho_v) {
  if (t != last_t_ + 1)
    fail(Errc::invalid_config, "metrics rounds must be recorded consecutively from t = 1");
  last_t_ = t;

  Vec y_star, v_star;
  if (oracle.has_ground_truth()) {
    y_star = oracle.inner_opt(t, x);
    v_star = oracle.system_opt(t, x);
  } else {
    y_star = solve_inner_gd(oracle, t, x);
    v_star = solve_system_cg(oracle, t, x, y_star);
  }
  Vec hyper = oracle.has_ground_truth() ? oracle.hypergradient(t, x)
                                        : oracle.f_grad_x_pop(t, x, y_star) +
                                              oracle.g_jac_xy_vec_pop(t, x, y_star, v_star);

  RoundRecord rec;
  ProjectedGradient pg = projected_gradient(oracle.leader_set(), x, hyper, alpha);
  rec.blreg_summand = pg.value.squaredNorm();
  blreg_ += rec.blreg_summand;
  summands_.push_back(rec.blreg_summand);
  cumulative_.push_back(blreg_);

  rec.y_err = (y - y_star).norm();
  rec.v_err = (v - v_star).norm();

  if (t == 1) {
    e1_ = rec.y_err * rec.y_err + rec.v_err * rec.v_err;
  } else {
    std::optional<DriftIncrements> inc;
    if (!grid_.force_grid) inc = oracle.drift_increments(t);
    if (inc) {
      V_ += inc->V;
      H2_ += inc->H2;
      Dx_ += inc->Dx;
      Dy_ += inc->Dy;
    } else {
      double v_sup = 0, h2_sup = 0;
      for (const Vec& xg : leader_grid(oracle.leader_set(), grid_.points_per_dim)) {
        Vec ys_prev = oracle.has_ground_truth() ? oracle.inner_opt(t - 1, xg)
                                                : solve_inner_gd(oracle, t - 1, xg);
        Vec ys_cur = oracle.has_ground_truth() ? oracle.inner_opt(t, xg)
                                               : solve_inner_gd(oracle, t, xg);
        v_sup = std::max(v_sup, std::abs(oracle.f_pop(t - 1, xg, ys_prev) -
                                         oracle.f_pop(t, xg, ys_cur)));
        h2_sup = std::max(h2_sup, (ys_prev - ys_cur).squaredNorm());
      }
      V_ += v_sup;
      H2_ += h2_sup;
      // Gradient drift of the outer objective over the grid x box-grid in y.
      double dx_sup = 0, dy_sup = 0;
      FeasibleSet ybox = symmetric_box(oracle.dim_y(), grid_.y_half_width);
      for (const Vec& xg : leader_grid(oracle.leader_set(), grid_.points_per_dim))
        for (const Vec& yg : leader_grid(ybox, grid_.points_per_dim)) {
          dx_sup = std::max(dx_sup, (oracle.f_grad_x_pop(t - 1, xg, yg) -
                                     oracle.f_grad_x_pop(t, xg, yg))
                                        .squaredNorm());
          dy_sup = std::max(dy_sup, (oracle.f_grad_y_pop(t - 1, xg, yg) -
                                     oracle.f_grad_y_pop(t, xg, yg))
                                        .squaredNorm());
        }
      Dx_ += dx_sup;
      Dy_ += dy_sup;
    }

    // Inner-objective deviations at the algorithm's current iterate.
    Gy_ += (oracle.g_grad_y_pop(t - 1, x, y) - oracle.g_grad_y_pop(t, x, y)).squaredNorm();
    Eigen::MatrixXd dH = reconstruct_hess(oracle, t - 1, x, y) - reconstruct_hess(oracle, t, x, y);
    double hn = spectral_norm(dH);
    Gyy_ += hn * hn;
    Eigen::MatrixXd dJ = reconstruct_jac(oracle, t - 1, x, y) - reconstruct_jac(oracle, t, x, y);
    double jn = spectral_norm(dJ);
    Gxy_ += jn * jn;

    // Gradient variations at the perturbed previous points.
    if (prev_.valid) {
      Vec zp = prev_.y + prev_.rho_v * prev_.v;
      Vec zm = prev_.y - prev_.rho_v * prev_.v;
      Gv_ += (oracle.g_grad_y_pop(t, prev_.x, zp) - oracle.g_grad_y_pop(t - 1, prev_.x, zp))
                 .squaredNorm() +
             (oracle.g_grad_y_pop(t, prev_.x, zm) - oracle.g_grad_y_pop(t - 1, prev_.x, zm))
                 .squaredNorm();
      Gx_ += (oracle.g_grad_x_pop(t, prev_.x, zp) - oracle.g_grad_x_pop(t - 1, prev_.x, zp))
                 .squaredNorm() +
             (oracle.g_grad_x_pop(t, prev_.x, zm) - oracle.g_grad_x_pop(t - 1, prev_.x, zm))
                 .squaredNorm();
    }
  }

  prev_ = Snapshot{x, y, v, rho_v, true};

  rec.blreg_cum = blreg_;
  rec.V_cum = V_;
  rec.H2_cum = H2_;
  rec.D_cum = D();
  rec.G_cum = G();
  return rec;
}

double h2_path_length(const BilevelOracle& oracle, long T, const GridSpec& grid) {
  double total = 0;
  for (long t = 2; t <= T; ++t) {
    std::optional<DriftIncrements> inc;
    if (!grid.force_grid) inc = oracle.drift_increments(t);
    if (inc) {
      total += inc->H2;
      continue;
    }
    double sup = 0;
    for (const Vec& xg : leader_grid(oracle.leader_set(), grid.points_per_dim)) {
      Vec prev = oracle.inner_opt(t - 1, xg);
      Vec cur = oracle.inner_opt(t, xg);
      sup = std::max(sup, (prev - cur).squaredNorm());
    }
    total += sup;
  }
  return total;
}

double regret_exponent(std::span<const double> blreg_cum, bool* degenerate) {
  if (degenerate) *degenerate = false;
  const std::size_t T = blreg_cum.size();
  if (T < 100) fail(Errc::invalid_config, "regret exponent needs at least two decades of rounds");
  std::size_t first = T / 10;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = first; i < T; ++i) {
    if (!(blreg_cum[i] > 0)) continue;
    double lx = std::log(static_cast<double>(i + 1));
    double ly = std::log(blreg_cum[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0)) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return (n * sxy - sx * sy) / denom;
}

double recompute_blreg(const BilevelOracle& oracle, std::span<const Vec> x_trace,
                       std::span<const double> alphas) {
  if (x_trace.size() != alphas.size())
    fail(Errc::dimension_mismatch, "trace and step arrays differ in length");
  double total = 0;
  for (std::size_t i = 0; i < x_trace.size(); ++i) {
    long t = static_cast<long>(i) + 1;
    Vec hyper = ground_truth_hypergradient(oracle, t, x_trace[i]);
    ProjectedGradient pg = projected_gradient(oracle.leader_set(), x_trace[i], hyper, alphas[i]);
    total += pg.value.squaredNorm();
  }
  return total;
}

}  // namespace obilevel
