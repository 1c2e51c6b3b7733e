#include "obilevel/problems.hpp"

#include <cmath>
#include <sstream>

#include "obilevel/rng.hpp"

namespace obilevel {

namespace {

// Block tags for deriving independent per-sample noise streams.
enum : std::uint64_t {
  kBlockValueNoise = 1,
  kBlockDirS = 2,
  kBlockDirR = 3,
  kBlockHessNoise = 4,
  kBlockJacNoise = 5,
};

std::uint64_t sample_key(const Batch& b, int i, std::uint64_t block) {
  return mix_keys({b.ctx.seed, static_cast<std::uint64_t>(b.ctx.t),
                   static_cast<std::uint64_t>(b.which == Source::f ? 0 : 1), b.salt,
                   static_cast<std::uint64_t>(i), block});
}

Vec gaussian_vec(NoiseStream& s, Index n, double scale) {
  Vec v(n);
  for (Index k = 0; k < n; ++k) v[k] = scale * s.next_normal();
  return v;
}

}  // namespace

BilevelOracle::BilevelOracle(double noise_std) : sigma_(noise_std) {
  if (noise_std < 0) fail(Errc::invalid_config, "noise level must be nonnegative");
}

Vec BilevelOracle::inner_opt(long, const Vec&) const {
  fail(Errc::unsupported, "instance provides no analytic inner solution");
}
Vec BilevelOracle::system_opt(long, const Vec&) const {
  fail(Errc::unsupported, "instance provides no analytic system solution");
}
Vec BilevelOracle::hypergradient(long, const Vec&) const {
  fail(Errc::unsupported, "instance provides no analytic hypergradient");
}

void BilevelOracle::check_point(const Vec& x, const Vec& y) const {
  if (x.size() != dim_x() || y.size() != dim_y())
    fail(Errc::dimension_mismatch, "query point dimensions do not match the instance");
  require_finite(x, "query point x");
  require_finite(y, "query point y");
}

void BilevelOracle::check_sample(const Batch& b, int i) const {
  if (i < 0 || i >= b.size) fail(Errc::invalid_config, "batch sample index out of range");
}

Batch BilevelOracle::draw_batch(const RoundContext& ctx, Source which, int size,
                                std::uint64_t salt, bool with_directions,
                                bool with_curvature) const {
  if (size < 1) fail(Errc::invalid_config, "batch size must be >= 1");
  if (ctx.t < 1) fail(Errc::invalid_config, "round index must be >= 1");
  Batch b;
  b.ctx = ctx;
  b.which = which;
  b.size = size;
  b.salt = salt;
  b.sigma = sigma_;
  const Index d1 = dim_x(), d2 = dim_y();
  if (sigma_ > 0) {
    b.value_noise.reserve(size);
    for (int i = 0; i < size; ++i) {
      NoiseStream s(sample_key(b, i, kBlockValueNoise));
      b.value_noise.push_back(gaussian_vec(s, d1 + d2, sigma_));
    }
  }
  if (with_directions) {
    b.dir_s.reserve(size);
    b.dir_r.reserve(size);
    for (int i = 0; i < size; ++i) {
      NoiseStream ss(sample_key(b, i, kBlockDirS));
      b.dir_s.push_back(sample_unit_sphere(ss, d1));
      NoiseStream sr(sample_key(b, i, kBlockDirR));
      b.dir_r.push_back(sample_unit_sphere(sr, d2));
    }
  }
  if (with_curvature && sigma_ > 0) {
    b.hess_noise.reserve(size);
    b.jac_noise.reserve(size);
    for (int i = 0; i < size; ++i) {
      NoiseStream sh(sample_key(b, i, kBlockHessNoise));
      Eigen::MatrixXd H(d2, d2);
      for (Index r = 0; r < d2; ++r)
        for (Index c = r; c < d2; ++c) {
          double e = sigma_ * sh.next_normal();
          H(r, c) = e;
          H(c, r) = e;
        }
      b.hess_noise.push_back(std::move(H));
      NoiseStream sj(sample_key(b, i, kBlockJacNoise));
      Eigen::MatrixXd J(d1, d2);
      for (Index r = 0; r < d1; ++r)
        for (Index c = 0; c < d2; ++c) J(r, c) = sigma_ * sj.next_normal();
      b.jac_noise.push_back(std::move(J));
    }
  }
  return b;
}

double BilevelOracle::f_value(const Batch& b, int i, const Vec& x, const Vec& y) const {
  check_point(x, y);
  check_sample(b, i);
  double v = f_pop(b.ctx.t, x, y);
  if (!b.value_noise.empty()) {
    const Vec& n = b.value_noise[i];
    v += n.head(dim_x()).dot(x) + n.tail(dim_y()).dot(y);
  }
  return v;
}

double BilevelOracle::g_value(const Batch& b, int i, const Vec& x, const Vec& y) const {
  check_point(x, y);
  check_sample(b, i);
  double v = g_pop(b.ctx.t, x, y);
  if (!b.value_noise.empty()) {
    const Vec& n = b.value_noise[i];
    v += n.head(dim_x()).dot(x) + n.tail(dim_y()).dot(y);
  }
  return v;
}

Vec BilevelOracle::f_grad_x(const Batch& b, int i, const Vec& x, const Vec& y) const {
  check_point(x, y);
  check_sample(b, i);
  Vec g = f_grad_x_pop(b.ctx.t, x, y);
  if (!b.value_noise.empty()) g += b.value_noise[i].head(dim_x());
  return g;
}

Vec BilevelOracle::f_grad_y(const Batch& b, int i, const Vec& x, const Vec& y) const {
  check_point(x, y);
  check_sample(b, i);
  Vec g = f_grad_y_pop(b.ctx.t, x, y);
  if (!b.value_noise.empty()) g += b.value_noise[i].tail(dim_y());
  return g;
}

Vec BilevelOracle::g_grad_x(const Batch& b, int i, const Vec& x, const Vec& y) const {
  check_point(x, y);
  check_sample(b, i);
  Vec g = g_grad_x_pop(b.ctx.t, x, y);
  if (!b.value_noise.empty()) g += b.value_noise[i].head(dim_x());
  return g;
}

Vec BilevelOracle::g_grad_y(const Batch& b, int i, const Vec& x, const Vec& y) const {
  check_point(x, y);
  check_sample(b, i);
  Vec g = g_grad_y_pop(b.ctx.t, x, y);
  if (!b.value_noise.empty()) g += b.value_noise[i].tail(dim_y());
  return g;
}

Vec BilevelOracle::g_hess_yy_vec(const Batch& b, int i, const Vec& x, const Vec& y,
                                 const Vec& v) const {
  check_point(x, y);
  check_sample(b, i);
  Vec out = g_hess_yy_vec_pop(b.ctx.t, x, y, v);
  if (!b.hess_noise.empty()) out += b.hess_noise[i] * v;
  return out;
}

Vec BilevelOracle::g_jac_xy_vec(const Batch& b, int i, const Vec& x, const Vec& y,
                                const Vec& v) const {
  check_point(x, y);
  check_sample(b, i);
  Vec out = g_jac_xy_vec_pop(b.ctx.t, x, y, v);
  if (!b.jac_noise.empty()) out += b.jac_noise[i] * v;
  return out;
}

namespace {
template <class Fn>
Vec batch_mean(int size, Index dim, Fn&& per_sample) {
  Vec acc = Vec::Zero(dim);
  for (int i = 0; i < size; ++i) acc += per_sample(i);
  return acc / static_cast<double>(size);
}
}  // namespace

Vec BilevelOracle::f_grad_x_avg(const Batch& b, const Vec& x, const Vec& y) const {
  return batch_mean(b.size, dim_x(), [&](int i) { return f_grad_x(b, i, x, y); });
}
Vec BilevelOracle::f_grad_y_avg(const Batch& b, const Vec& x, const Vec& y) const {
  return batch_mean(b.size, dim_y(), [&](int i) { return f_grad_y(b, i, x, y); });
}
Vec BilevelOracle::g_grad_x_avg(const Batch& b, const Vec& x, const Vec& y) const {
  return batch_mean(b.size, dim_x(), [&](int i) { return g_grad_x(b, i, x, y); });
}
Vec BilevelOracle::g_grad_y_avg(const Batch& b, const Vec& x, const Vec& y) const {
  return batch_mean(b.size, dim_y(), [&](int i) { return g_grad_y(b, i, x, y); });
}
Vec BilevelOracle::g_hess_yy_vec_avg(const Batch& b, const Vec& x, const Vec& y,
                                     const Vec& v) const {
  return batch_mean(b.size, dim_y(), [&](int i) { return g_hess_yy_vec(b, i, x, y, v); });
}
Vec BilevelOracle::g_jac_xy_vec_avg(const Batch& b, const Vec& x, const Vec& y,
                                    const Vec& v) const {
  return batch_mean(b.size, dim_x(), [&](int i) { return g_jac_xy_vec(b, i, x, y, v); });
}

// ---------------------------------------------------------------------------
// Numeric ground truth

Vec solve_inner_gd(const BilevelOracle& oracle, long t, const Vec& x,
                   const FallbackTols& tols) {
  const SmoothnessProfile pr = oracle.profile();
  const double step = 2.0 / (pr.mu_g + pr.ell_g1);
  Vec y = Vec::Zero(oracle.dim_y());
  for (long it = 0; it < tols.inner_max_iter; ++it) {
    Vec grad = oracle.g_grad_y_pop(t, x, y);
    if (grad.norm() <= tols.inner_tol) return y;
    y -= step * grad;
    if (!y.allFinite()) fail(Errc::solver_failure, "inner gradient descent diverged");
  }
  fail(Errc::solver_failure, "inner gradient descent hit its iteration cap");
}

Vec solve_system_cg(const BilevelOracle& oracle, long t, const Vec& x, const Vec& y_star,
                    const FallbackTols& tols) {
  const Index n = oracle.dim_y();
  auto apply = [&](const Vec& v) { return oracle.g_hess_yy_vec_pop(t, x, y_star, v); };
  Vec rhs = -oracle.f_grad_y_pop(t, x, y_star);
  Vec v = Vec::Zero(n);
  Vec r = rhs;
  if (r.norm() <= tols.cg_tol) return v;
  Vec p = r;
  double rs = r.squaredNorm();
  for (long it = 0; it < tols.cg_max_iter; ++it) {
    Vec ap = apply(p);
    double denom = p.dot(ap);
    if (!(denom > 0) || !std::isfinite(denom))
      fail(Errc::solver_failure, "conjugate gradient lost positive definiteness");
    double step = rs / denom;
    v += step * p;
    r -= step * ap;
    double rs_next = r.squaredNorm();
    if (std::sqrt(rs_next) <= tols.cg_tol) return v;
    p = r + (rs_next / rs) * p;
    rs = rs_next;
  }
  fail(Errc::solver_failure, "conjugate gradient hit its iteration cap");
}

Vec fallback_hypergradient(const BilevelOracle& oracle, long t, const Vec& x,
                           const FallbackTols& tols) {
  Vec y_star = solve_inner_gd(oracle, t, x, tols);
  Vec v_star = solve_system_cg(oracle, t, x, y_star, tols);
  return oracle.f_grad_x_pop(t, x, y_star) + oracle.g_jac_xy_vec_pop(t, x, y_star, v_star);
}

Vec ground_truth_hypergradient(const BilevelOracle& oracle, long t, const Vec& x) {
  if (oracle.has_ground_truth()) return oracle.hypergradient(t, x);
  return fallback_hypergradient(oracle, t, x);
}

// ---------------------------------------------------------------------------
// DriftingQuadratic

DriftingQuadratic::DriftingQuadratic() : DriftingQuadratic(Options()) {}

DriftingQuadratic::DriftingQuadratic(Options opts) : BilevelOracle(opts.noise_std), opts_(opts) {
  if (opts_.dim < 1) fail(Errc::invalid_config, "dimension must be >= 1");
}

double DriftingQuadratic::a1(long t) const { return opts_.a1_scale / static_cast<double>(eff(t)); }
double DriftingQuadratic::a2(long t) const {
  return opts_.a2_scale / std::sqrt(static_cast<double>(eff(t)));
}

FeasibleSet DriftingQuadratic::leader_set() const { return symmetric_box(opts_.dim, 1.0); }

SmoothnessProfile DriftingQuadratic::profile() const {
  SmoothnessProfile pr;
  pr.mu_g = 1.0;
  pr.ell_f0 = 3.0 * std::sqrt(static_cast<double>(opts_.dim));
  pr.ell_f1 = 1.0;
  pr.ell_g1 = (1.0 + std::sqrt(5.0)) / 2.0;  // spectral norm of the coupled Hessian
  pr.ell_g2 = 0.0;
  return pr;
}

double DriftingQuadratic::f_pop(long t, const Vec& x, const Vec& y) const {
  const double s1 = a1(t), s2 = a2(t);
  return 0.5 * (x.array() + 2.0 * s1).matrix().squaredNorm() +
         0.5 * (y.array() - s2).matrix().squaredNorm();
}

double DriftingQuadratic::g_pop(long t, const Vec& x, const Vec& y) const {
  const double s2 = a2(t);
  return 0.5 * y.squaredNorm() - (x.array() - s2).matrix().dot(y);
}

Vec DriftingQuadratic::f_grad_x_pop(long t, const Vec& x, const Vec&) const {
  return (x.array() + 2.0 * a1(t)).matrix();
}
Vec DriftingQuadratic::f_grad_y_pop(long t, const Vec&, const Vec& y) const {
  return (y.array() - a2(t)).matrix();
}
Vec DriftingQuadratic::g_grad_x_pop(long, const Vec&, const Vec& y) const { return -y; }
Vec DriftingQuadratic::g_grad_y_pop(long t, const Vec& x, const Vec& y) const {
  return y - (x.array() - a2(t)).matrix();
}
Vec DriftingQuadratic::g_hess_yy_vec_pop(long, const Vec&, const Vec&, const Vec& v) const {
  return v;
}
Vec DriftingQuadratic::g_jac_xy_vec_pop(long, const Vec&, const Vec&, const Vec& v) const {
  return -v;
}

Vec DriftingQuadratic::inner_opt(long t, const Vec& x) const {
  return (x.array() - a2(t)).matrix();
}
Vec DriftingQuadratic::system_opt(long t, const Vec& x) const {
  return (2.0 * a2(t) - x.array()).matrix();
}
Vec DriftingQuadratic::hypergradient(long t, const Vec& x) const {
  return (2.0 * x.array() + 2.0 * a1(t) - 2.0 * a2(t)).matrix();
}

std::optional<DriftIncrements> DriftingQuadratic::drift_increments(long t) const {
  if (t < 2) return DriftIncrements{};
  const double d = static_cast<double>(opts_.dim);
  const double d1a = a1(t) - a1(t - 1);
  const double d2a = a2(t) - a2(t - 1);
  const double dsq = (a1(t) * a1(t) - a1(t - 1) * a1(t - 1)) +
                     (a2(t) * a2(t) - a2(t - 1) * a2(t - 1));
  DriftIncrements inc;
  // sup over the box of |2(d1a - d2a) sum(x_k) + 2d dsq|.
  inc.V = 2.0 * d * std::abs(d1a - d2a) + 2.0 * d * std::abs(dsq);
  inc.H2 = d * d2a * d2a;
  inc.Dx = 4.0 * d * d1a * d1a;
  inc.Dy = d * d2a * d2a;
  return inc;
}

// ---------------------------------------------------------------------------
// LeastSquaresDrift

namespace {
double ls_kappa(long t) { return 1.0 + 1.0 / static_cast<double>(t); }
}  // namespace

LeastSquaresDrift::LeastSquaresDrift(double noise_std) : BilevelOracle(noise_std) {}

SmoothnessProfile LeastSquaresDrift::profile() const {
  SmoothnessProfile pr;
  pr.mu_g = 1.0;
  pr.ell_f0 = 12.0;  // over the unit box around the optimum
  pr.ell_f1 = 8.0;   // 2 * max eig(A_t' A_t) at t = 1
  pr.ell_g1 = 1.0;
  pr.ell_g2 = 0.0;
  return pr;
}

double LeastSquaresDrift::f_pop(long t, const Vec& x, const Vec&) const {
  const double k = ls_kappa(t);
  const double r0 = x[0] - 1.0;
  const double r1 = k * x[1] - 1.0;
  return r0 * r0 + r1 * r1;
}

double LeastSquaresDrift::g_pop(long, const Vec&, const Vec& y) const {
  return 0.5 * y.squaredNorm();
}

Vec LeastSquaresDrift::f_grad_x_pop(long t, const Vec& x, const Vec&) const {
  const double k = ls_kappa(t);
  Vec g(2);
  g[0] = 2.0 * (x[0] - 1.0);
  g[1] = 2.0 * k * (k * x[1] - 1.0);
  return g;
}
Vec LeastSquaresDrift::f_grad_y_pop(long, const Vec&, const Vec&) const {
  return Vec::Zero(1);
}
Vec LeastSquaresDrift::g_grad_x_pop(long, const Vec&, const Vec&) const {
  return Vec::Zero(2);
}
Vec LeastSquaresDrift::g_grad_y_pop(long, const Vec&, const Vec& y) const { return y; }
Vec LeastSquaresDrift::g_hess_yy_vec_pop(long, const Vec&, const Vec&, const Vec& v) const {
  return v;
}
Vec LeastSquaresDrift::g_jac_xy_vec_pop(long, const Vec&, const Vec&, const Vec&) const {
  return Vec::Zero(2);
}

Vec LeastSquaresDrift::inner_opt(long, const Vec&) const { return Vec::Zero(1); }
Vec LeastSquaresDrift::system_opt(long, const Vec&) const { return Vec::Zero(1); }
Vec LeastSquaresDrift::hypergradient(long t, const Vec& x) const {
  return f_grad_x_pop(t, x, Vec::Zero(1));
}

std::optional<DriftIncrements> LeastSquaresDrift::drift_increments(long t) const {
  if (t < 2) return DriftIncrements{};
  DriftIncrements inc;
  const double td = static_cast<double>(t);
  inc.V = 2.0 / (td * (td - 1.0) * (td - 1.0));
  inc.H2 = 0.0;
  // Gradient drift measured over the unit box (the leader set is unbounded).
  const double kt = ls_kappa(t), kp = ls_kappa(t - 1);
  const double slope = 2.0 * std::abs(kt * kt - kp * kp);
  const double shift = 2.0 * std::abs(kt - kp);
  inc.Dx = (slope + shift) * (slope + shift);
  inc.Dy = 0.0;
  return inc;
}

// ---------------------------------------------------------------------------
// DemoCosine

DemoCosine::DemoCosine(double noise_std) : BilevelOracle(noise_std) {}

double DemoCosine::a_seq(long t) { return 1.0 + 0.5 * std::sin(static_cast<double>(t)); }
double DemoCosine::b_seq(long t) { return 1.0 + std::sin(0.5 * static_cast<double>(t)); }
double DemoCosine::c_seq(long t) { return 10.0 * b_seq(t); }

FeasibleSet DemoCosine::leader_set() const { return symmetric_box(1, 3.141592653589793); }

SmoothnessProfile DemoCosine::profile() const {
  SmoothnessProfile pr;
  pr.mu_g = 2.0;
  pr.ell_f0 = 1.0;
  pr.ell_f1 = 1.0;
  pr.ell_g1 = 8.0;  // valid near the inner solution manifold |y - cos x| <= 1
  pr.ell_g2 = 8.0;
  return pr;
}

double DemoCosine::f_pop(long, const Vec&, const Vec&) const {
  fail(Errc::unsupported, "demo-cosine has no outer objective");
}
Vec DemoCosine::f_grad_x_pop(long, const Vec&, const Vec&) const {
  fail(Errc::unsupported, "demo-cosine has no outer objective");
}
Vec DemoCosine::f_grad_y_pop(long, const Vec&, const Vec&) const {
  fail(Errc::unsupported, "demo-cosine has no outer objective");
}

double DemoCosine::g_pop(long, const Vec& x, const Vec& y) const {
  const double r = y[0] - std::cos(x[0]);
  return r * r;
}
Vec DemoCosine::g_grad_x_pop(long, const Vec& x, const Vec& y) const {
  Vec g(1);
  g[0] = 2.0 * (y[0] - std::cos(x[0])) * std::sin(x[0]);
  return g;
}
Vec DemoCosine::g_grad_y_pop(long, const Vec& x, const Vec& y) const {
  Vec g(1);
  g[0] = 2.0 * (y[0] - std::cos(x[0]));
  return g;
}
Vec DemoCosine::g_hess_yy_vec_pop(long, const Vec&, const Vec&, const Vec& v) const {
  return 2.0 * v;
}
Vec DemoCosine::g_jac_xy_vec_pop(long, const Vec& x, const Vec&, const Vec& v) const {
  return 2.0 * std::sin(x[0]) * v;
}
Vec DemoCosine::inner_opt(long, const Vec& x) const {
  Vec y(1);
  y[0] = std::cos(x[0]);
  return y;
}

// ---------------------------------------------------------------------------
// QuadraticPair

QuadraticPair::QuadraticPair(Options opts) : BilevelOracle(opts.noise_std), opts_(std::move(opts)) {
  d1_ = opts_.A.rows();
  d2_ = opts_.Q.rows();
  if (d1_ < 1 || d2_ < 1) fail(Errc::invalid_config, "quadratic pair needs A and Q matrices");
  if (opts_.B.rows() != d2_ || opts_.C.rows() != d1_ || opts_.C.cols() != d2_ ||
      opts_.R.rows() != d1_ || opts_.R.cols() != d2_ || opts_.a.size() != d1_ ||
      opts_.b.size() != d2_ || opts_.q.size() != d2_)
    fail(Errc::dimension_mismatch, "quadratic pair matrices have inconsistent shapes");
  if (std::holds_alternative<Unconstrained>(opts_.leader_set) &&
      std::get<Unconstrained>(opts_.leader_set).dim == 0)
    opts_.leader_set = Unconstrained{d1_};
  q_solver_.compute(opts_.Q);
  if (q_solver_.info() != Eigen::Success || !q_solver_.isPositive())
    fail(Errc::invalid_config, "quadratic pair requires positive definite Q");
}

QuadraticPair::Options QuadraticPair::identity_pair(int d1, int d2) {
  Options o;
  o.A = Eigen::MatrixXd::Identity(d1, d1);
  o.B = Eigen::MatrixXd::Zero(d2, d2);
  o.C = Eigen::MatrixXd::Zero(d1, d2);
  o.Q = Eigen::MatrixXd::Identity(d2, d2);
  o.R = Eigen::MatrixXd::Zero(d1, d2);
  o.a = Vec::Zero(d1);
  o.b = Vec::Zero(d2);
  o.q = Vec::Zero(d2);
  return o;
}

SmoothnessProfile QuadraticPair::profile() const {
  SmoothnessProfile pr;
  Eigen::MatrixXd gz(d1_ + d2_, d1_ + d2_);
  gz.setZero();
  gz.topRightCorner(d1_, d2_) = opts_.R;
  gz.bottomLeftCorner(d2_, d1_) = opts_.R.transpose();
  gz.bottomRightCorner(d2_, d2_) = opts_.Q;
  Eigen::MatrixXd fz(d1_ + d2_, d1_ + d2_);
  fz.topLeftCorner(d1_, d1_) = opts_.A;
  fz.topRightCorner(d1_, d2_) = opts_.C;
  fz.bottomLeftCorner(d2_, d1_) = opts_.C.transpose();
  fz.bottomRightCorner(d2_, d2_) = opts_.B;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esg(gz), esq(opts_.Q), esf(fz);
  pr.mu_g = esq.eigenvalues().minCoeff();
  pr.ell_g1 = esg.eigenvalues().cwiseAbs().maxCoeff();
  pr.ell_g1 = std::max(pr.ell_g1, pr.mu_g);
  pr.ell_g2 = 0.0;
  pr.ell_f1 = std::max(esf.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
  pr.ell_f0 = opts_.ell_f0;
  return pr;
}

double QuadraticPair::f_pop(long, const Vec& x, const Vec& y) const {
  return 0.5 * x.dot(opts_.A * x) + opts_.a.dot(x) + 0.5 * y.dot(opts_.B * y) +
         opts_.b.dot(y) + x.dot(opts_.C * y);
}
double QuadraticPair::g_pop(long, const Vec& x, const Vec& y) const {
  return 0.5 * y.dot(opts_.Q * y) + x.dot(opts_.R * y) + opts_.q.dot(y);
}
Vec QuadraticPair::f_grad_x_pop(long, const Vec& x, const Vec& y) const {
  return opts_.A * x + opts_.a + opts_.C * y;
}
Vec QuadraticPair::f_grad_y_pop(long, const Vec& x, const Vec& y) const {
  return opts_.B * y + opts_.b + opts_.C.transpose() * x;
}
Vec QuadraticPair::g_grad_x_pop(long, const Vec&, const Vec& y) const { return opts_.R * y; }
Vec QuadraticPair::g_grad_y_pop(long, const Vec& x, const Vec& y) const {
  return opts_.Q * y + opts_.R.transpose() * x + opts_.q;
}
Vec QuadraticPair::g_hess_yy_vec_pop(long, const Vec&, const Vec&, const Vec& v) const {
  return opts_.Q * v;
}
Vec QuadraticPair::g_jac_xy_vec_pop(long, const Vec&, const Vec&, const Vec& v) const {
  return opts_.R * v;
}

Vec QuadraticPair::inner_opt(long, const Vec& x) const {
  return q_solver_.solve(-(opts_.R.transpose() * x + opts_.q));
}
Vec QuadraticPair::system_opt(long t, const Vec& x) const {
  Vec ys = inner_opt(t, x);
  return q_solver_.solve(-f_grad_y_pop(t, x, ys));
}
Vec QuadraticPair::hypergradient(long t, const Vec& x) const {
  Vec ys = inner_opt(t, x);
  return f_grad_x_pop(t, x, ys) + opts_.R * system_opt(t, x);
}

}  // namespace obilevel
