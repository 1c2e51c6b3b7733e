#ifndef OBILEVEL_PROBLEMS_HPP
#define OBILEVEL_PROBLEMS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "obilevel/errors.hpp"
#include "obilevel/schedules.hpp"
#include "obilevel/vec.hpp"

namespace obilevel {

// Identifies one round of the online game. Identical (t, seed) and query
// point always produce identical stochastic replies.
struct RoundContext {
  long t = 1;
  std::uint64_t seed = 0;
};

enum class Source { f, g };

// A realized mini-batch: the per-sample randomness is materialized once so
// that every query point is evaluated on the same samples. The struct is
// plain data; tests may forge one with hand-chosen directions.
struct Batch {
  RoundContext ctx;
  Source which = Source::f;
  int size = 0;
  std::uint64_t salt = 0;
  double sigma = 0.0;
  // Per-sample noise n_i: a value query at (x, y) is offset by <n_i, [x;y]>,
  // gradient queries by the matching slice of n_i. Empty when sigma == 0.
  std::vector<Vec> value_noise;
  // Per-sample unit directions for two-point estimators.
  std::vector<Vec> dir_s;  // dim d1
  std::vector<Vec> dir_r;  // dim d2
  // Per-sample curvature perturbations applied to Hessian-/Jacobian-vector
  // replies. Materialized on request only.
  std::vector<Eigen::MatrixXd> hess_noise;  // symmetric d2 x d2
  std::vector<Eigen::MatrixXd> jac_noise;   // d1 x d2
};

// Optional exact per-round drift of an analytic instance, used by the
// metrics module in place of grid maximization.
struct DriftIncrements {
  double V = 0;
  double H2 = 0;
  double Dx = 0;
  double Dy = 0;
};

// Round-indexed stochastic oracle for an online bilevel instance. Concrete
// instances implement the population quantities; the stochastic surface is
// derived from them here. Hessians and Jacobians are reachable only through
// vector products.
class BilevelOracle {
 public:
  explicit BilevelOracle(double noise_std = 0.0);
  virtual ~BilevelOracle() = default;

  virtual Index dim_x() const = 0;
  virtual Index dim_y() const = 0;
  virtual FeasibleSet leader_set() const = 0;
  virtual SmoothnessProfile profile() const = 0;
  double noise_std() const { return sigma_; }

  // Population (noise-free) quantities.
  virtual double f_pop(long t, const Vec& x, const Vec& y) const = 0;
  virtual double g_pop(long t, const Vec& x, const Vec& y) const = 0;
  virtual Vec f_grad_x_pop(long t, const Vec& x, const Vec& y) const = 0;
  virtual Vec f_grad_y_pop(long t, const Vec& x, const Vec& y) const = 0;
  virtual Vec g_grad_x_pop(long t, const Vec& x, const Vec& y) const = 0;
  virtual Vec g_grad_y_pop(long t, const Vec& x, const Vec& y) const = 0;
  virtual Vec g_hess_yy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const = 0;
  virtual Vec g_jac_xy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const = 0;

  // Analytic ground truth, when the instance has one.
  virtual bool has_ground_truth() const { return false; }
  virtual Vec inner_opt(long t, const Vec& x) const;
  virtual Vec system_opt(long t, const Vec& x) const;
  virtual Vec hypergradient(long t, const Vec& x) const;

  virtual std::optional<DriftIncrements> drift_increments(long) const { return std::nullopt; }

  // Stochastic surface. draw_batch is deterministic in (seed, t, which,
  // size, salt); the flags only control which blocks get materialized.
  virtual Batch draw_batch(const RoundContext& ctx, Source which, int size,
                           std::uint64_t salt = 0, bool with_directions = true,
                           bool with_curvature = false) const;

  virtual double f_value(const Batch& b, int i, const Vec& x, const Vec& y) const;
  virtual double g_value(const Batch& b, int i, const Vec& x, const Vec& y) const;
  virtual Vec f_grad_x(const Batch& b, int i, const Vec& x, const Vec& y) const;
  virtual Vec f_grad_y(const Batch& b, int i, const Vec& x, const Vec& y) const;
  virtual Vec g_grad_x(const Batch& b, int i, const Vec& x, const Vec& y) const;
  virtual Vec g_grad_y(const Batch& b, int i, const Vec& x, const Vec& y) const;
  virtual Vec g_hess_yy_vec(const Batch& b, int i, const Vec& x, const Vec& y,
                            const Vec& v) const;
  virtual Vec g_jac_xy_vec(const Batch& b, int i, const Vec& x, const Vec& y,
                           const Vec& v) const;

  // Batch-averaged replies over the realized samples.
  Vec f_grad_x_avg(const Batch& b, const Vec& x, const Vec& y) const;
  Vec f_grad_y_avg(const Batch& b, const Vec& x, const Vec& y) const;
  Vec g_grad_x_avg(const Batch& b, const Vec& x, const Vec& y) const;
  Vec g_grad_y_avg(const Batch& b, const Vec& x, const Vec& y) const;
  Vec g_hess_yy_vec_avg(const Batch& b, const Vec& x, const Vec& y, const Vec& v) const;
  Vec g_jac_xy_vec_avg(const Batch& b, const Vec& x, const Vec& y, const Vec& v) const;

 protected:
  void check_point(const Vec& x, const Vec& y) const;
  void check_sample(const Batch& b, int i) const;

 private:
  double sigma_;
};

// Numeric ground truth: inner problem solved by deterministic gradient
// descent, then the linear system by conjugate gradients.
struct FallbackTols {
  double inner_tol = 1e-10;
  long inner_max_iter = 2000000;
  double cg_tol = 1e-10;
  long cg_max_iter = 20000;
};

Vec solve_inner_gd(const BilevelOracle& oracle, long t, const Vec& x,
                   const FallbackTols& tols = {});
Vec solve_system_cg(const BilevelOracle& oracle, long t, const Vec& x, const Vec& y_star,
                    const FallbackTols& tols = {});
Vec fallback_hypergradient(const BilevelOracle& oracle, long t, const Vec& x,
                           const FallbackTols& tols = {});
// Analytic path when available, numeric fallback otherwise.
Vec ground_truth_hypergradient(const BilevelOracle& oracle, long t, const Vec& x);

// ---------------------------------------------------------------------------
// Instances

// Drifting quadratic pair on x in [-1,1]^d:
//   f_t(x,y) = 1/2 ||x + 2 a1(t) 1||^2 + 1/2 ||y - a2(t) 1||^2
//   g_t(x,y) = 1/2 ||y||^2 - <x - a2(t) 1, y>
// with a1(t) = a1_scale/t and a2(t) = a2_scale/sqrt(t). Closed forms:
// y*_t(x) = x - a2 1, v*_t(x) = 2 a2 1 - x, hypergradient 2x + 2(a1 - a2) 1.
class DriftingQuadratic : public BilevelOracle {
 public:
  struct Options {
    int dim = 1;
    double noise_std = 0.0;
    double a1_scale = 1.0;
    double a2_scale = 1.0;
    long freeze_at = 0;  // > 0 freezes the drift at that round
  };
  DriftingQuadratic();
  explicit DriftingQuadratic(Options opts);

  double a1(long t) const;
  double a2(long t) const;

  Index dim_x() const override { return opts_.dim; }
  Index dim_y() const override { return opts_.dim; }
  FeasibleSet leader_set() const override;
  SmoothnessProfile profile() const override;

  double f_pop(long t, const Vec& x, const Vec& y) const override;
  double g_pop(long t, const Vec& x, const Vec& y) const override;
  Vec f_grad_x_pop(long t, const Vec& x, const Vec& y) const override;
  Vec f_grad_y_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_grad_x_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_grad_y_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_hess_yy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const override;
  Vec g_jac_xy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const override;

  bool has_ground_truth() const override { return true; }
  Vec inner_opt(long t, const Vec& x) const override;
  Vec system_opt(long t, const Vec& x) const override;
  Vec hypergradient(long t, const Vec& x) const override;
  std::optional<DriftIncrements> drift_increments(long t) const override;

 private:
  long eff(long t) const { return (opts_.freeze_at > 0 && t > opts_.freeze_at) ? opts_.freeze_at : t; }
  Options opts_;
};

// Single-level drifting least squares f_t(x) = ||A_t x - b||^2 with
// A_t = diag(1, 1 + 1/t), b = (1, 1), wrapped as a bilevel instance with a
// decoupled inner problem g = 1/2 y^2 (so y* = 0, v* = 0).
class LeastSquaresDrift : public BilevelOracle {
 public:
  explicit LeastSquaresDrift(double noise_std = 0.0);

  Index dim_x() const override { return 2; }
  Index dim_y() const override { return 1; }
  FeasibleSet leader_set() const override { return Unconstrained{2}; }
  SmoothnessProfile profile() const override;

  double f_pop(long t, const Vec& x, const Vec& y) const override;
  double g_pop(long t, const Vec& x, const Vec& y) const override;
  Vec f_grad_x_pop(long t, const Vec& x, const Vec& y) const override;
  Vec f_grad_y_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_grad_x_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_grad_y_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_hess_yy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const override;
  Vec g_jac_xy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const override;

  bool has_ground_truth() const override { return true; }
  Vec inner_opt(long t, const Vec& x) const override;
  Vec system_opt(long t, const Vec& x) const override;
  Vec hypergradient(long t, const Vec& x) const override;
  std::optional<DriftIncrements> drift_increments(long t) const override;
};

// Demo instance with a nonconvex-in-x inner objective g(x, y) = (y - cos x)^2
// and the drift sequences a_t = 1 + 0.5 sin t, b_t = 1 + sin(0.5 t),
// c_t = 10 b_t. It has no outer objective; f queries raise unsupported.
// Useful for exercising the inner pipeline and smoothing bounds.
class DemoCosine : public BilevelOracle {
 public:
  explicit DemoCosine(double noise_std = 0.0);

  static double a_seq(long t);
  static double b_seq(long t);
  static double c_seq(long t);

  Index dim_x() const override { return 1; }
  Index dim_y() const override { return 1; }
  FeasibleSet leader_set() const override;
  SmoothnessProfile profile() const override;

  double f_pop(long t, const Vec& x, const Vec& y) const override;
  double g_pop(long t, const Vec& x, const Vec& y) const override;
  Vec f_grad_x_pop(long t, const Vec& x, const Vec& y) const override;
  Vec f_grad_y_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_grad_x_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_grad_y_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_hess_yy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const override;
  Vec g_jac_xy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const override;

  bool has_ground_truth() const override { return true; }
  Vec inner_opt(long t, const Vec& x) const override;  // y* = cos x
};

// Time-invariant quadratic pair with explicit matrices, mainly for tests:
//   f(x,y) = 1/2 x'Ax + a'x + 1/2 y'By + b'y + x'Cy
//   g(x,y) = 1/2 y'Qy + x'Ry + q'y          (Q symmetric positive definite)
class QuadraticPair : public BilevelOracle {
 public:
  struct Options {
    Eigen::MatrixXd A, B, C, Q, R;
    Vec a, b, q;
    double noise_std = 0.0;
    double ell_f0 = 10.0;
    FeasibleSet leader_set = Unconstrained{0};  // dim patched in ctor if 0
  };
  explicit QuadraticPair(Options opts);

  static Options identity_pair(int d1, int d2);  // f = 1/2||x||^2 + 1/2||y||^2, g = 1/2||y||^2

  Index dim_x() const override { return d1_; }
  Index dim_y() const override { return d2_; }
  FeasibleSet leader_set() const override { return opts_.leader_set; }
  SmoothnessProfile profile() const override;

  double f_pop(long t, const Vec& x, const Vec& y) const override;
  double g_pop(long t, const Vec& x, const Vec& y) const override;
  Vec f_grad_x_pop(long t, const Vec& x, const Vec& y) const override;
  Vec f_grad_y_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_grad_x_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_grad_y_pop(long t, const Vec& x, const Vec& y) const override;
  Vec g_hess_yy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const override;
  Vec g_jac_xy_vec_pop(long t, const Vec& x, const Vec& y, const Vec& v) const override;

  bool has_ground_truth() const override { return true; }
  Vec inner_opt(long t, const Vec& x) const override;
  Vec system_opt(long t, const Vec& x) const override;
  Vec hypergradient(long t, const Vec& x) const override;
  std::optional<DriftIncrements> drift_increments(long) const override {
    return DriftIncrements{};
  }

 private:
  Options opts_;
  Index d1_, d2_;
  Eigen::LDLT<Eigen::MatrixXd> q_solver_;
};

}  // namespace obilevel

#endif
