#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hlsv/scaling.hpp"

using namespace hlsv;

TEST_CASE("steepest functions") {
  double a = 0.3;
  auto [S0, R0] = steepest_functions(a, cplx(0, 0));
  CHECK(std::abs(S0) < 1e-15);
  CHECK(std::abs(R0) < 1e-15);

  SUBCASE("oddness of S_a") {
    Rng rng(13, 0);
    for (int i = 0; i < 1000; ++i) {
      cplx z(0.6 * (rng.next_double() - 0.5), 2.0 * (rng.next_double() - 0.5));
      auto Sp = steepest_functions(a, z).first;
      auto Sm = steepest_functions(a, -z).first;
      CHECK(std::abs(Sp + Sm) < 1e-13);
    }
  }

  SUBCASE("Taylor constants by finite differences") {
    double h = 1e-2;
    auto S = [&](double x) { return steepest_functions(a, cplx(x, 0)).first.real(); };
    auto R = [&](double x) { return steepest_functions(a, cplx(x, 0)).second.real(); };
    double d3 = (-S(-2 * h) + 2 * S(-h) - 2 * S(h) + S(2 * h)) / (-2 * h * h * h);
    CHECK(std::abs(d3 - 2 * a * (1 - a) / std::pow(1 + a, 3)) < 1e-6);
    double d2 = (R(-h) - 2 * R(0) + R(h)) / (h * h);
    CHECK(std::abs(d2 - a / std::pow(1 + a, 2)) < 1e-6);
  }

  SUBCASE("branch cut guard") {
    // 1 + a e^z real negative requires Re z >= -log a and Im z = pi
    CHECK_THROWS_AS(steepest_functions(0.5, cplx(2.0, PI)), domain_error);
  }
}

TEST_CASE("descent contours") {
  for (double a : {0.05, 0.2}) {
    auto dc = make_descent_contours(a, 0.1);
    CHECK(dc.A > 0.0);
    CHECK(std::atan(1.0 / dc.A) > PI / 3.0);
    CHECK(dc.A * PI < -std::log(0.1) / 20.0);
    // descent signs along the rays and the mid contour
    double pz = 0.0, pw = 0.0, pm = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      double y = PI * i / 1000.0;
      double vz = steepest_functions(a, dc.gamma_Z(y)).first.real();
      double vw = steepest_functions(a, dc.gamma_W(y)).first.real();
      double vm = steepest_functions(a, dc.gamma_mid(y)).second.real();
      CHECK(vz <= pz + 1e-12);
      CHECK(vw >= pw - 1e-12);
      CHECK(vm <= pm + 1e-12);
      pz = vz;
      pw = vw;
      pm = vm;
    }
  }
}

TEST_CASE("convergence experiment smoke run") {
  auto p = ModelParams::from_at(0.05, 0.05);
  auto rep = convergence_experiment(p, {20, 40}, 400, 1.5, -1.5, 99, {-1.0, 0.0, 1.0}, 50);
  REQUIRE(rep.rows.size() == 2);
  for (auto& row : rep.rows) {
    CHECK(row.sup_discrepancy >= 0.0);
    CHECK(row.sup_discrepancy <= 1.0);
    CHECK(row.boot_lo <= row.boot_hi);
    for (auto& pt : row.grid) {
      CHECK(pt.airy >= 0.0);
      CHECK(pt.airy <= 1.0);
    }
  }
  // determinism
  auto rep2 = convergence_experiment(p, {20, 40}, 400, 1.5, -1.5, 99, {-1.0, 0.0, 1.0}, 50);
  CHECK(rep.rows[0].sup_discrepancy == rep2.rows[0].sup_discrepancy);
  CHECK(rep.rows[1].boot_hi == rep2.rows[1].boot_hi);

  // centering: empirical mean of lambda'_1(n1) within 5 SEs of the drift
  ModelParams ps = ModelParams::from_at(0.05, 0.05);
  auto rep3 = convergence_experiment(ps, {200}, 4000, 1.5, -1.5, 7, {0.0}, 10);
  ScaledInputs si = scaled_inputs(ps, 200, 1.5, -1.5, 0.0, 0.0);
  double drift = si.f1 * 200 + si.f1p * (200 - si.n1);
  // fluctuations are O(sigma_a M^{1/3}); allow a wide but honest window
  double window = 5.0 * si.sigma_a * std::cbrt(200.0) / std::sqrt(4000.0) +
                  std::cbrt(200.0);
  CHECK(std::abs(rep3.rows[0].mean_l1 - drift) < window);
}
