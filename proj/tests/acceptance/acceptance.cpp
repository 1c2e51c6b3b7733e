// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances are pinned in code next to each check.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "obilevel/baselines.hpp"
#include "obilevel/harness.hpp"
#include "obilevel/metrics.hpp"
#include "obilevel/sogd.hpp"
#include "obilevel/zo.hpp"
#include "obilevel/zo_sogd.hpp"

using namespace obilevel;

namespace {

int g_failures = 0;

void report(int id, const char* label, bool pass, double seconds, const std::string& detail) {
  std::printf("[%s] criterion %2d (%6.2f s): %s%s%s\n", pass ? "PASS" : "FAIL", id, seconds,
              label, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <class Fn>
void criterion(int id, const char* label, double budget_seconds, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (pass && budget_seconds > 0 && secs > budget_seconds) {
    pass = false;
    detail += " [exceeded " + std::to_string(budget_seconds) + " s budget]";
  }
  report(id, label, pass, secs, detail);
}

Vec vec1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

// --------------------------------------------------------------------------
// 1. Hypergradient oracle agreement.
bool crit_hypergradient(std::string& detail) {
  DriftingQuadratic dq;
  NoiseStream s(1001);
  double worst_fb = 0, worst_fd = 0;
  for (int rep = 0; rep < 100; ++rep) {
    long t = 1 + static_cast<long>(s.next_unit() * 999);
    Vec x = vec1(2 * s.next_unit() - 1);
    Vec analytic = dq.hypergradient(t, x);
    Vec numeric = fallback_hypergradient(dq, t, x);
    worst_fb = std::max(worst_fb, (analytic - numeric).norm());
    const double h = 1e-5;
    auto outer = [&](double xv) { return dq.f_pop(t, vec1(xv), dq.inner_opt(t, vec1(xv))); };
    double fd = (outer(x[0] + h) - outer(x[0] - h)) / (2 * h);
    worst_fd = std::max(worst_fd, std::abs(analytic[0] - fd));
  }
  std::ostringstream os;
  os << "max |analytic-fallback| = " << worst_fb << " (tol 1e-8), max |analytic-fd| = "
     << worst_fd << " (tol 1e-6)";
  detail = os.str();
  return worst_fb <= 1e-8 && worst_fd <= 1e-6;
}

// --------------------------------------------------------------------------
// 2. Window-sum / recursion equivalence.
bool crit_window(std::string& detail) {
  NoiseStream s(2002);
  double worst = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    int dim = 1 + static_cast<int>(s.next_unit() * 7.999);
    int rounds = 1 + static_cast<int>(s.next_unit() * 49.999);
    double eta = 0.005 + 0.99 * s.next_unit();
    std::vector<Vec> grads;
    Vec d = Vec::Zero(dim);
    for (int t = 1; t <= rounds; ++t) {
      Vec g(dim);
      for (int k = 0; k < dim; ++k) g[k] = 3.0 * s.next_normal();
      grads.push_back(g);
      d = (t == 1) ? Vec(eta * g) : ema_recursion(d, g, eta);
    }
    worst = std::max(worst, (window_smoothed_gradient(grads, eta) - d).norm());
  }
  std::ostringstream os;
  os << "max route gap = " << worst << " over 1000 histories (tol 1e-12)";
  detail = os.str();
  return worst <= 1e-12;
}

// --------------------------------------------------------------------------
// 3. Projected-gradient mapping inequalities.
bool crit_projected_gradient(std::string& detail) {
  NoiseStream s(3003);
  long violations = 0;
  const double slack = 1e-10;
  for (int kind = 0; kind < 3; ++kind) {
    for (int rep = 0; rep < 10000; ++rep) {
      const Index dim = 1 + static_cast<Index>(s.next_unit() * 3.999);
      FeasibleSet set;
      Vec x(dim);
      if (kind == 0) {
        set = Unconstrained{dim};
        for (Index k = 0; k < dim; ++k) x[k] = 2 * s.next_normal();
      } else if (kind == 1) {
        Vec lo(dim), hi(dim);
        for (Index k = 0; k < dim; ++k) {
          lo[k] = s.next_normal();
          hi[k] = lo[k] + 0.1 + std::abs(s.next_normal());
          x[k] = lo[k] + s.next_unit() * (hi[k] - lo[k]);
        }
        set = make_box(lo, hi);
      } else {
        Vec c(dim);
        for (Index k = 0; k < dim; ++k) c[k] = s.next_normal();
        double radius = 0.1 + std::abs(s.next_normal());
        set = make_ball(c, radius);
        x = c + (s.next_unit() * radius) * sample_unit_sphere(s, dim);
      }
      Vec p1(dim), p2(dim);
      for (Index k = 0; k < dim; ++k) {
        p1[k] = 2 * s.next_normal();
        p2[k] = 2 * s.next_normal();
      }
      double alpha = 0.05 + 2 * s.next_unit();
      Vec g1 = projected_gradient(set, x, p1, alpha).value;
      Vec g2 = projected_gradient(set, x, p2, alpha).value;
      if ((g1 - g2).norm() > (p1 - p2).norm() + slack) ++violations;
      Vec gsum = projected_gradient(set, x, p1 + p2, alpha).value;
      if (gsum.norm() > g1.norm() + p2.norm() + slack) ++violations;
      if (p1.dot(g1) < g1.squaredNorm() - slack) ++violations;
    }
  }
  std::ostringstream os;
  os << violations << " violations over 3x10^4 draws (slack 1e-10)";
  detail = os.str();
  return violations == 0;
}

// --------------------------------------------------------------------------
// 4. Zeroth-order estimator unbiasedness.
bool crit_zo_unbiased(std::string& detail) {
  QuadraticPair::Options o = QuadraticPair::identity_pair(2, 2);
  o.Q << 1.2, 0.3, 0.3, 0.9;
  o.R << 0.4, -0.2, 0.1, 0.5;
  o.q = Vec::Zero(2);
  o.q << 0.3, -0.4;
  o.B << 0.8, 0.1, 0.1, 0.6;
  o.C << 0.2, -0.1, 0.0, 0.3;
  o.a << -0.2, 0.5;
  o.b << 0.1, 0.2;
  o.noise_std = 0.1;
  QuadraticPair qp(o);
  Vec x(2), y(2);
  x << 0.4, -0.3;
  y << 0.2, 0.6;
  const double rho = 0.03;
  const int N = 100000;

  struct Est {
    const char* name;
    std::function<Vec(const Batch&)> estimate;
    Vec truth;
  };
  std::vector<Est> ests;
  ests.push_back({"grad_y_g", [&](const Batch& b) { return zo_grad_y_g(qp, b, x, y, rho); },
                  qp.g_grad_y_pop(1, x, y)});
  ests.push_back({"grad_x_g", [&](const Batch& b) { return zo_grad_x_g(qp, b, x, y, rho); },
                  qp.g_grad_x_pop(1, x, y)});
  ests.push_back({"grad_y_f", [&](const Batch& b) { return zo_grad_y_f(qp, b, x, y, rho); },
                  qp.f_grad_y_pop(1, x, y)});
  ests.push_back({"grad_x_f", [&](const Batch& b) { return zo_grad_x_f(qp, b, x, y, rho); },
                  qp.f_grad_x_pop(1, x, y)});

  std::ostringstream os;
  bool pass = true;
  for (std::size_t e = 0; e < ests.size(); ++e) {
    Source which = (e < 2) ? Source::g : Source::f;
    Vec mean = Vec::Zero(2), m2 = Vec::Zero(2);
    for (int r = 0; r < N; ++r) {
      Batch b = qp.draw_batch(RoundContext{1, 404 + static_cast<std::uint64_t>(e)}, which, 1,
                              static_cast<std::uint64_t>(r));
      Vec v = ests[e].estimate(b);
      Vec dv = v - mean;
      mean += dv / (r + 1);
      m2 += dv.cwiseProduct(v - mean);
    }
    double worst_z = 0;
    for (Index k = 0; k < 2; ++k) {
      double se = std::sqrt(m2[k] / (N - 1) / N);
      worst_z = std::max(worst_z, std::abs(mean[k] - ests[e].truth[k]) / se);
    }
    if (worst_z > 3.0) pass = false;
    os << ests[e].name << " max|z| = " << worst_z << "; ";
  }

  // Per-sample exactness on a linear objective, any radius.
  struct LinearOracle : BilevelOracle {
    Vec a;
    explicit LinearOracle(Vec av) : a(std::move(av)) {}
    Index dim_x() const override { return 1; }
    Index dim_y() const override { return a.size(); }
    FeasibleSet leader_set() const override { return Unconstrained{1}; }
    SmoothnessProfile profile() const override { return {}; }
    double f_pop(long, const Vec&, const Vec& y) const override { return a.dot(y); }
    double g_pop(long, const Vec&, const Vec& y) const override { return a.dot(y); }
    Vec f_grad_x_pop(long, const Vec&, const Vec&) const override { return Vec::Zero(1); }
    Vec f_grad_y_pop(long, const Vec&, const Vec&) const override { return a; }
    Vec g_grad_x_pop(long, const Vec&, const Vec&) const override { return Vec::Zero(1); }
    Vec g_grad_y_pop(long, const Vec&, const Vec&) const override { return a; }
    Vec g_hess_yy_vec_pop(long, const Vec&, const Vec&, const Vec&) const override {
      return Vec::Zero(a.size());
    }
    Vec g_jac_xy_vec_pop(long, const Vec&, const Vec&, const Vec&) const override {
      return Vec::Zero(1);
    }
  };
  Vec a(2);
  a << 1, 0;
  LinearOracle lin(a);
  Batch fb;
  fb.ctx = RoundContext{1, 0};
  fb.which = Source::g;
  fb.size = 1;
  Vec r1(2);
  r1 << 1, 0;
  fb.dir_r.push_back(r1);
  fb.dir_s.push_back(Vec::Ones(1));
  double worst_lin = 0;
  for (double rr : {1e-6, 1e-2, 1.0, 50.0}) {
    Vec est = zo_grad_y_g(lin, fb, Vec::Zero(1), Vec::Zero(2), rr);
    worst_lin = std::max({worst_lin, std::abs(est[0] - 2.0), std::abs(est[1])});
  }
  if (worst_lin > 1e-12) pass = false;
  os << "linear per-sample err = " << worst_lin;
  detail = os.str();
  return pass;
}

// --------------------------------------------------------------------------
// 5. Curvature probes with exact inner gradients are exact on quadratics.
bool crit_zo_hessian(std::string& detail) {
  QuadraticPair::Options o = QuadraticPair::identity_pair(2, 3);
  o.Q << 1.0, 0.2, 0.0, 0.2, 2.0, 0.1, 0.0, 0.1, 1.5;
  o.R << 0.3, -0.2, 0.4, 0.0, 0.5, -0.1;
  QuadraticPair qp(o);
  NoiseStream s(5005);
  double worst = 0;
  for (double rho_v : {1e-3, 1e-1}) {
    for (int rep = 0; rep < 50; ++rep) {
      Vec x(2), y(3), v(3);
      for (int k = 0; k < 2; ++k) x[k] = s.next_normal();
      for (int k = 0; k < 3; ++k) {
        y[k] = s.next_normal();
        v[k] = s.next_normal();
      }
      auto exact_y = [&](int, const Vec& yp) { return qp.g_grad_y_pop(1, x, yp); };
      auto exact_x = [&](int, const Vec& yp) { return qp.g_grad_x_pop(1, x, yp); };
      Vec hv = gradient_difference_vec(4, 3, y, v, rho_v, exact_y);
      Vec jv = gradient_difference_vec(4, 2, y, v, rho_v, exact_x);
      worst = std::max(worst, (hv - qp.g_hess_yy_vec_pop(1, x, y, v)).norm());
      worst = std::max(worst, (jv - qp.g_jac_xy_vec_pop(1, x, y, v)).norm());
    }
  }
  std::ostringstream os;
  os << "max product error = " << worst << " (tol 1e-12)";
  detail = os.str();
  return worst <= 1e-12;
}

// --------------------------------------------------------------------------
// 6. Smoothing bounds: value gap and argmin gap.
struct SmoothInstance {
  // g(x, y) = mu/2 ||y||^2 + sum_k w_k softplus(<u_k, y> + <s_k, x> + b_k)
  double mu;
  std::vector<double> w, bias;
  std::vector<Vec> u, sx;
  Index d1, d2;

  double value(const Vec& x, const Vec& y) const {
    double total = 0.5 * mu * y.squaredNorm();
    for (std::size_t k = 0; k < w.size(); ++k) {
      double z = u[k].dot(y) + sx[k].dot(x) + bias[k];
      // log(1 + e^z), stable for large |z|
      total += w[k] * (z > 30 ? z : std::log1p(std::exp(z)));
    }
    return total;
  }
  Vec grad_y(const Vec& x, const Vec& y) const {
    Vec g = mu * y;
    for (std::size_t k = 0; k < w.size(); ++k) {
      double z = u[k].dot(y) + sx[k].dot(x) + bias[k];
      double sig = 1.0 / (1.0 + std::exp(-z));
      g += w[k] * sig * u[k];
    }
    return g;
  }
  double ell_g1() const {
    double ell = mu;
    for (std::size_t k = 0; k < w.size(); ++k)
      ell += 0.25 * w[k] * (u[k].squaredNorm() + sx[k].squaredNorm());
    return ell;
  }
  Vec argmin_y(const Vec& x) const {
    Vec y = Vec::Zero(d2);
    double step = 1.0 / ell_g1();
    for (int it = 0; it < 200000; ++it) {
      Vec g = grad_y(x, y);
      if (g.norm() <= 1e-12) break;
      y -= step * g;
    }
    return y;
  }
};

SmoothInstance random_instance(NoiseStream& s) {
  SmoothInstance inst;
  inst.d1 = 1 + static_cast<Index>(s.next_unit() * 1.999);
  inst.d2 = 1 + static_cast<Index>(s.next_unit() * 1.999);
  inst.mu = 0.5 + s.next_unit();
  int m = 2 + static_cast<int>(s.next_unit() * 1.999);
  for (int k = 0; k < m; ++k) {
    inst.w.push_back(0.2 + s.next_unit());
    inst.bias.push_back(0.5 * s.next_normal());
    Vec u(inst.d2), sx(inst.d1);
    for (Index j = 0; j < inst.d2; ++j) u[j] = s.next_normal();
    for (Index j = 0; j < inst.d1; ++j) sx[j] = s.next_normal();
    inst.u.push_back(u);
    inst.sx.push_back(sx);
  }
  return inst;
}

bool crit_smoothing_bounds(std::string& detail) {
  NoiseStream s(6006);
  long value_viol = 0, argmin_viol = 0;
  double worst_value_margin = -1e300, worst_argmin_margin = -1e300;
  for (int inst_id = 0; inst_id < 20; ++inst_id) {
    SmoothInstance inst = random_instance(s);
    Vec x0(inst.d1);
    for (Index j = 0; j < inst.d1; ++j) x0[j] = 0.5 * s.next_normal();
    Vec y0(inst.d2);
    for (Index j = 0; j < inst.d2; ++j) y0[j] = 0.5 * s.next_normal();
    const double ell = inst.ell_g1();
    for (double rho : {0.1, 0.01}) {
      SmoothingRadii radii{rho, rho, 0};
      // Ball-uniform perturbation samples shared by both checks.
      const int N = 20000;
      std::vector<Vec> ps, pr;
      ps.reserve(N);
      pr.reserve(N);
      for (int i = 0; i < N; ++i) {
        Vec ds = sample_unit_sphere(s, inst.d1) *
                 std::pow(s.next_unit(), 1.0 / static_cast<double>(inst.d1));
        Vec dr = sample_unit_sphere(s, inst.d2) *
                 std::pow(s.next_unit(), 1.0 / static_cast<double>(inst.d2));
        ps.push_back(ds);
        pr.push_back(dr);
      }

      // Value gap: |E g(x + rho s, y + rho r) - g(x, y)| <= ell rho^2.
      double mean = 0, m2 = 0;
      for (int i = 0; i < N; ++i) {
        double v = inst.value(x0 + rho * ps[i], y0 + rho * pr[i]);
        double dv = v - mean;
        mean += dv / (i + 1);
        m2 += dv * (v - mean);
      }
      double se = std::sqrt(m2 / (N - 1) / N);
      double gap = std::abs(mean - inst.value(x0, y0));
      double bound = smoothed_value_gap_bound(ell, radii);
      worst_value_margin = std::max(worst_value_margin, gap - (bound + 3 * se));
      if (gap > bound + 3 * se) ++value_viol;

      // Argmin gap: minimize the fixed-sample smoothed objective in y.
      Vec yhat = Vec::Zero(inst.d2);
      {
        double step = 1.0 / ell;
        for (int it = 0; it < 5000; ++it) {
          Vec g = Vec::Zero(inst.d2);
          for (int i = 0; i < N; ++i) g += inst.grad_y(x0 + rho * ps[i], yhat + rho * pr[i]);
          g /= N;
          if (g.norm() <= 1e-10) break;
          yhat -= step * g;
        }
      }
      Vec ystar = inst.argmin_y(x0);
      // Monte-Carlo slack: spread of the per-sample gradients at the solution
      // shifts the sample argmin by at most 3 SE / mu.
      double gvar = 0;
      Vec gmean = Vec::Zero(inst.d2);
      std::vector<Vec> gs;
      gs.reserve(N);
      for (int i = 0; i < N; ++i) {
        gs.push_back(inst.grad_y(x0 + rho * ps[i], yhat + rho * pr[i]));
        gmean += gs.back();
      }
      gmean /= N;
      for (const Vec& g : gs) gvar += (g - gmean).squaredNorm();
      gvar /= (N - 1);
      double gse = std::sqrt(gvar / N);
      double dist = (yhat - ystar).norm();
      double allowed = std::sqrt(smoothed_argmin_gap_bound(ell, inst.mu, radii)) +
                       3 * gse / inst.mu + 1e-8;
      worst_argmin_margin = std::max(worst_argmin_margin, dist - allowed);
      if (dist > allowed) ++argmin_viol;
    }
  }
  std::ostringstream os;
  os << value_viol << " value-gap and " << argmin_viol
     << " argmin-gap violations over 20 instances x 2 radii (worst margins " << worst_value_margin
     << ", " << worst_argmin_margin << ")";
  detail = os.str();
  return value_viol == 0 && argmin_viol == 0;
}

// --------------------------------------------------------------------------
// 7. First-order sublinear regret on the drifting quadratic.
bool crit_sogd_regret(std::string& detail) {
  RunConfig cfg;
  cfg.problem.name = "drifting-quadratic";
  cfg.problem.dim = 1;
  cfg.algo = Algo::sogd;
  cfg.T = 10000;
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.noise_std = 0.1;
  cfg.manual.c = 2.0;
  cfg.manual.c_beta = 2.0;
  cfg.manual.c_delta = 1.0;
  cfg.manual.c_gamma = 1.0;
  cfg.manual.c_eta = 1.0;
  cfg.manual.c_lambda = 1.0;
  cfg.manual.p = 3.0;
  cfg.p_given = true;
  auto dir = std::filesystem::temp_directory_path() / "obilevel_acc_sogd";
  std::filesystem::remove_all(dir);
  cfg.out_dir = dir.string();
  RunSummary summary = run(cfg);
  if (!summary.diverged_seeds.empty()) {
    detail = "run diverged";
    return false;
  }
  std::vector<double> exps;
  double avg_at_1e3 = 0, avg_at_1e4 = 0;
  for (const SeedResult& r : summary.per_seed) {
    if (!r.exponent) {
      detail = "missing exponent";
      return false;
    }
    exps.push_back(*r.exponent);
  }
  // Recover BL-Reg at T = 10^3 from the stored CSVs.
  for (const SeedResult& r : summary.per_seed) {
    std::ifstream in(r.csv_file);
    std::string line;
    std::getline(in, line);
    long t = 0;
    while (std::getline(in, line)) {
      ++t;
      if (t == 1000 || t == 10000) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cols;
        while (std::getline(ls, cell, ',')) cols.push_back(cell);
        double cum = std::stod(cols[3]);
        if (t == 1000) avg_at_1e3 += cum / 1000.0;
        if (t == 10000) avg_at_1e4 += cum / 10000.0;
      }
    }
  }
  avg_at_1e3 /= summary.per_seed.size();
  avg_at_1e4 /= summary.per_seed.size();
  double med = median(exps);
  std::ostringstream os;
  os << "median exponent = " << med << " (<= 0.9), avg regret ratio = "
     << avg_at_1e4 / avg_at_1e3 << " (<= 0.5)";
  detail = os.str();
  std::filesystem::remove_all(dir);
  return med <= 0.9 && avg_at_1e4 <= 0.5 * avg_at_1e3;
}

// --------------------------------------------------------------------------
// 8. Zeroth-order sublinear regret.
bool crit_zo_regret(std::string& detail) {
  RunConfig cfg;
  cfg.problem.name = "drifting-quadratic";
  cfg.problem.dim = 2;
  cfg.algo = Algo::zo_sogd;
  cfg.T = 20000;
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.noise_std = 0.1;
  cfg.manual.c = 2.0;
  cfg.manual.c_beta = 2.0;
  cfg.manual.c_delta = 1.0;
  cfg.manual.c_gamma = 1.0;
  cfg.manual.c_eta = 1.0;
  cfg.manual.c_lambda = 1.0;
  cfg.manual.c_v = 1.0;
  auto dir = std::filesystem::temp_directory_path() / "obilevel_acc_zo";
  std::filesystem::remove_all(dir);
  cfg.out_dir = dir.string();
  RunSummary summary = run(cfg);
  if (!summary.diverged_seeds.empty()) {
    detail = "run diverged";
    return false;
  }
  std::vector<double> exps, yerrs;
  for (const SeedResult& r : summary.per_seed) {
    if (!r.exponent) {
      detail = "missing exponent";
      return false;
    }
    exps.push_back(*r.exponent);
    std::ifstream in(r.csv_file);
    std::string line, last;
    std::getline(in, line);
    while (std::getline(in, line))
      if (!line.empty()) last = line;
    std::istringstream ls(last);
    std::string cell;
    std::vector<std::string> cols;
    while (std::getline(ls, cell, ',')) cols.push_back(cell);
    yerrs.push_back(std::stod(cols[9]));
  }
  double med_exp = median(exps);
  double med_yerr = median(yerrs);
  std::ostringstream os;
  os << "median exponent = " << med_exp << " (<= 0.95), median final y-err = " << med_yerr
     << " (<= 0.1)";
  detail = os.str();
  std::filesystem::remove_all(dir);
  return med_exp <= 0.95 && med_yerr <= 0.1;
}

// --------------------------------------------------------------------------
// 9. Schedule and constant fidelity.
bool crit_schedule_fidelity(std::string& detail) {
  bool pass = true;
  std::ostringstream os;

  ManualConstants k;
  k.c = 8;
  k.p = 1;
  Schedule s26 = Schedule::first_order(k, 100);
  double a19 = s26.at(19).alpha;
  if (std::abs(a19 - 1.0 / 3.0) > 1e-15) pass = false;
  os << "alpha_19|c=8 = " << a19 << "; ";

  ManualConstants kz;
  kz.c = 2;
  kz.p = 1;
  Schedule s32 = Schedule::zeroth_order(kz, 100, 2, 10);
  double rho_r = s32.at(1).rho_r;
  if (std::abs(rho_r - 0.01) > 1e-15) pass = false;
  os << "rho_r|d2=10,T=100 = " << rho_r << "; ";

  SmoothnessProfile unit;
  unit.mu_g = unit.ell_f0 = unit.ell_f1 = unit.ell_g1 = 1.0;
  unit.ell_g2 = 0.0;
  ConstantLedger led = derived_constants(unit);
  if (std::abs(led.M_f - std::sqrt(2.0)) > 1e-15) pass = false;
  if (std::abs(led.L_mug - 0.5) > 1e-15) pass = false;
  os << "M_f = " << led.M_f << ", L_mug = " << led.L_mug;
  detail = os.str();
  return pass;
}

// --------------------------------------------------------------------------
// 10. Byte-identical reruns.
bool crit_determinism(std::string& detail) {
  auto dir1 = std::filesystem::temp_directory_path() / "obilevel_acc_det1";
  auto dir2 = std::filesystem::temp_directory_path() / "obilevel_acc_det2";
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  RunConfig cfg;
  cfg.problem.name = "drifting-quadratic";
  cfg.algo = Algo::zo_sogd;
  cfg.T = 200;
  cfg.seeds = {21, 22, 23};
  cfg.noise_std = 0.2;
  cfg.manual.p = 3.0;
  cfg.p_given = true;
  cfg.out_dir = dir1.string();
  run(cfg);
  cfg.out_dir = dir2.string();
  run(cfg);
  bool pass = true;
  for (std::uint64_t seed : cfg.seeds) {
    auto read = [&](const std::filesystem::path& d) {
      std::ifstream in((d / ("seed_" + std::to_string(seed) + ".csv")).string(),
                       std::ios::binary);
      std::ostringstream os;
      os << in.rdbuf();
      return os.str();
    };
    std::string a = read(dir1), b = read(dir2);
    if (a.empty() || a != b) pass = false;
  }
  // A first-order rerun must be byte-identical as well.
  cfg.algo = Algo::sogd;
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  cfg.out_dir = dir1.string();
  run(cfg);
  cfg.out_dir = dir2.string();
  run(cfg);
  for (std::uint64_t seed : cfg.seeds) {
    auto read = [&](const std::filesystem::path& d) {
      std::ifstream in((d / ("seed_" + std::to_string(seed) + ".csv")).string(),
                       std::ios::binary);
      std::ostringstream os;
      os << in.rdbuf();
      return os.str();
    };
    if (read(dir1) != read(dir2)) pass = false;
  }
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  detail = pass ? "CSV bytes identical across reruns" : "CSV bytes differ";
  return pass;
}

}  // namespace

int main() {
  criterion(1, "hypergradient oracle agreement", 5.0, crit_hypergradient);
  criterion(2, "window-smoothing / recursion equivalence", 1.0, crit_window);
  criterion(3, "projected-gradient inequalities", 5.0, crit_projected_gradient);
  criterion(4, "zeroth-order estimator unbiasedness", 30.0, crit_zo_unbiased);
  criterion(5, "curvature probe exactness", 1.0, crit_zo_hessian);
  criterion(6, "smoothing bounds", 60.0, crit_smoothing_bounds);
  criterion(7, "first-order sublinear regret", 60.0, crit_sogd_regret);
  criterion(8, "zeroth-order sublinear regret", 300.0, crit_zo_regret);
  criterion(9, "schedule and constant fidelity", 1.0, crit_schedule_fidelity);
  criterion(10, "byte-identical reruns", 0.0, crit_determinism);
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
