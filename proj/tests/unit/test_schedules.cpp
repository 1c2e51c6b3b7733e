#include <doctest.h>

#include <cmath>

#include "obilevel/schedules.hpp"

using namespace obilevel;

namespace {

SmoothnessProfile unit_profile() {
  SmoothnessProfile pr;
  pr.mu_g = 1;
  pr.ell_f0 = 1;
  pr.ell_f1 = 1;
  pr.ell_g1 = 1;
  pr.ell_g2 = 0;
  return pr;
}

}  // namespace

TEST_CASE("derived constants on the unit profile") {
  ConstantLedger k = derived_constants(unit_profile());
  CHECK(k.M_f == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(k.M_v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(k.L_y == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k.L_mug == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(k.L_mug_acute == doctest::Approx(1.0).epsilon(1e-15));  // (1+1)*1/2
  CHECK(k.nu == doctest::Approx(1.0));
  // c_beta = sqrt(880) * L_y * M_f / L_mug
  CHECK(k.c_beta == doctest::Approx(std::sqrt(880.0) * std::sqrt(2.0) / 0.5));
  CHECK(k.c == doctest::Approx(std::max({4.0 * k.L_f, k.c_beta * 2.0, 2.0})));
  CHECK(k.Gamma == doctest::Approx(11.0 * 2.0 / (0.5 * k.c_beta)));
  CHECK(k.Phi > 0);
  CHECK(k.Psi > 0);
  CHECK(k.Omega > 0);
  CHECK(k.c_gamma > 0);
  CHECK(k.c_eta > 0);
  CHECK(k.c_lambda > 0);
}

TEST_CASE("derived constants are monotone in ell_g2 through M_f") {
  SmoothnessProfile lo = unit_profile();
  SmoothnessProfile hi = unit_profile();
  hi.ell_g2 = 3.0;
  CHECK(derived_constants(hi).M_f > derived_constants(lo).M_f);
}

TEST_CASE("profile validation") {
  SmoothnessProfile bad = unit_profile();
  bad.mu_g = 0;
  CHECK_THROWS_AS(derived_constants(bad), Error);
  bad = unit_profile();
  bad.ell_g1 = 0.5;  // below mu_g
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("first-order schedule spot values") {
  ManualConstants k;
  k.c = 8;
  k.c_beta = 2;
  k.c_delta = 1;
  k.c_gamma = 9;
  k.c_eta = 1;
  k.c_lambda = 1;
  k.p = 1;
  Schedule s = Schedule::first_order(k, 100);
  ScheduleEntry e19 = s.at(19);
  CHECK(e19.alpha == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(e19.beta == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(e19.b == 1);
  CHECK(e19.bbar == 1);
  // weight at round 20 uses alpha_19^2: 9 * (1/3)^2 = 1, clamp boundary.
  CHECK(s.at(20).gamma == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.at(1).gamma == 1.0);
}

TEST_CASE("zeroth-order schedule spot values") {
  ManualConstants k;
  k.c = 11;  // c + t = 27 at t = 16
  k.p = 1;
  Schedule s = Schedule::zeroth_order(k, 100, 8, 8);  // d1 + d2 = 16 -> scale 8
  CHECK(s.at(16).alpha == doctest::Approx(1.0 / 24.0).epsilon(1e-12));

  Schedule s2 = Schedule::zeroth_order(k, 100, 2, 10);
  CHECK(s2.at(1).rho_r == doctest::Approx(0.01).epsilon(1e-15));

  Schedule s3 = Schedule::zeroth_order(k, 8, 2, 2);  // b = ceil(2/8) = 1
  CHECK(s3.at(1).b == 1);
  CHECK(s3.at(1).bbar == std::max(1L, static_cast<long>(std::ceil(std::pow(8.0, 2.0 / 3.0) /
                                                                  std::pow(4.0, 0.75)))));
  CHECK(s3.at(3).rho_v == doctest::Approx(std::sqrt(k.c_v * s3.at(3).alpha)));
}

TEST_CASE("alpha decays strictly and sum alpha^3 stays under log(T+1)") {
  for (double c : {1.0, 2.0, 8.0}) {
    ManualConstants k;
    k.c = c;
    k.p = 1;
    const long T = 1000000;
    Schedule s = Schedule::first_order(k, T);
    double sum_cubes = 0;
    double prev = 1e300;
    for (long t = 1; t <= T; ++t) {
      double a = s.at(t).alpha;
      CHECK(a < prev);
      prev = a;
      sum_cubes += a * a * a;
    }
    CHECK(sum_cubes <= std::log(static_cast<double>(T + 1)));
  }
}

TEST_CASE("schedule construction is reproducible") {
  ManualConstants k;
  k.c = 3;
  k.p = 2;
  Schedule a = Schedule::first_order(k, 500);
  Schedule b = Schedule::first_order(k, 500);
  for (long t = 1; t <= 500; ++t) {
    ScheduleEntry ea = a.at(t), eb = b.at(t);
    CHECK(ea.alpha == eb.alpha);
    CHECK(ea.gamma == eb.gamma);
    CHECK(ea.lambda == eb.lambda);
  }
}

TEST_CASE("theory-mode momentum weights clamp with a count") {
  Schedule s = Schedule::first_order_theory(unit_profile(), 50);
  CHECK(s.clamp_count() > 0);
  for (long t = 1; t <= 50; ++t) {
    ScheduleEntry e = s.at(t);
    CHECK(e.gamma > 0);
    CHECK(e.gamma <= 1.0);
    CHECK(e.lambda <= 1.0);
    CHECK(e.eta <= 1.0);
  }
}

TEST_CASE("zeroth-order theory ledger is finite and positive") {
  ZoConstantLedger z = derived_constants_zo(unit_profile(), 2, 2);
  for (double v : {z.c_beta, z.c_delta, z.Gamma, z.Upsilon, z.Phi, z.Psi, z.Omega, z.c_v,
                   z.c_gamma, z.c_eta, z.c_lambda, z.c}) {
    CHECK(std::isfinite(v));
    CHECK(v > 0);
  }
  Schedule s = Schedule::zeroth_order_theory(unit_profile(), 100, 2, 2);
  CHECK(s.at(5).alpha > 0);
}

TEST_CASE("schedule rejects invalid inputs") {
  ManualConstants k;
  k.c = -1;
  CHECK_THROWS_AS(Schedule::first_order(k, 10), Error);
  k.c = 2;
  CHECK_THROWS_AS(Schedule::first_order(k, 0), Error);
  CHECK_THROWS_AS(Schedule::zeroth_order(k, 10, 0, 2), Error);
  CHECK_THROWS_AS(derived_constants_zo(unit_profile(), 0, 1), Error);
}
