#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hlsv/params.hpp"

using namespace hlsv;

TEST_CASE("parameter conversion") {
  auto p = ModelParams::from_at(0.1, 0.1);
  CHECK(p.b1 == doctest::Approx(0.1 * 0.99 / 0.999).epsilon(1e-14));
  CHECK(p.b2 == doctest::Approx(0.99 / 0.999).epsilon(1e-14));

  auto q = ModelParams::from_b(0.2, 0.5);
  CHECK(q.t == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(q.a * q.a == doctest::Approx(0.625).epsilon(1e-14));

  // a -> 0 at fixed t: b1 -> t, b2 -> 1
  auto lim = ModelParams::from_at(1e-8, 0.35);
  CHECK(lim.b1 == doctest::Approx(0.35).epsilon(1e-10));
  CHECK(lim.b2 == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(ModelParams::from_at(1.2, 0.5), domain_error);
  CHECK_THROWS_AS(ModelParams::from_b(0.6, 0.4), domain_error);
}

TEST_CASE("round trip (a,t) -> (b1,b2) -> (a,t)") {
  Rng rng(11, 0);
  for (int i = 0; i < 1000; ++i) {
    double a = 0.01 + 0.98 * rng.next_double();
    double t = 0.01 + 0.98 * rng.next_double();
    auto p = ModelParams::from_at(a, t);
    // the b-side determines (a, t) through b1/b2 and the complements; both
    // defining relations hold simultaneously at full precision
    auto q = ModelParams::from_b_complements(p.b1c, p.b2c);
    CHECK(std::abs(q.a - a) <= 1e-14 * a);
    CHECK(std::abs(p.b1 / p.b2 - t) <= 1e-14 * t);
    CHECK(std::abs(p.a * p.a - p.b2c / p.b1c) <= 1e-14 * p.a * p.a);
    CHECK(0.0 < p.b1);
    CHECK(p.b1 < p.b2);
    CHECK(p.b2 < 1.0);
  }
  // the plain (b1, b2) route agrees wherever 1-b2 is well resolved
  auto p = ModelParams::from_at(0.4, 0.3);
  auto q = ModelParams::from_b(p.b1, p.b2);
  CHECK(std::abs(q.a - 0.4) < 1e-12);
  CHECK(std::abs(q.t - 0.3) < 1e-12);
}

TEST_CASE("good radii search") {
  auto p = ModelParams::from_at(1e-3, 1e-3);
  auto r = find_good_radii(p, 0.5);
  REQUIRE(r.has_value());
  CHECK(r->rho <= 0.5);
  // independent re-verification of the contraction condition and nesting
  CHECK(radii_admissible(p, *r));
  CHECK(radii_contraction(r->r1, r->r2, r->r3, r->r4, p.t) == doctest::Approx(r->rho));
  CHECK(r->r1 > r->r2);
  CHECK(r->r2 > r->r3);
  CHECK(r->r3 > r->r4);
  CHECK(r->r4 > p.t * r->r1);

  // deterministic given the same budget
  auto r2 = find_good_radii(p, 0.5);
  CHECK(r->r1 == r2->r1);
  CHECK(r->rho == r2->rho);

  // not good near 1
  auto bad = ModelParams::from_at(0.9, 0.9);
  CHECK_FALSE(find_good_radii(bad, 0.5).has_value());
}

TEST_CASE("fallback radii are always admissible") {
  for (double a : {0.05, 0.1, 0.3, 0.6}) {
    for (double t : {0.05, 0.1, 0.4}) {
      auto p = ModelParams::from_at(a, t);
      auto r = fallback_radii(p);
      CHECK(radii_admissible(p, r));
    }
  }
}

TEST_CASE("scaled inputs") {
  auto p = ModelParams::from_at(0.5, 0.2);
  auto si = scaled_inputs(p, 100, 1.0, -0.5, 0.3, -0.2);
  CHECK(si.sigma_a == doctest::Approx(0.419974).epsilon(1e-5));
  CHECK(si.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(si.f1p == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(si.f1pp == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(si.tau1 == doctest::Approx(std::pow(2.0, -2.0 / 3.0)).epsilon(1e-12));
  CHECK(si.n1 == 121);
  CHECK(si.n2 >= 1);
  CHECK(si.n2 <= si.n1);

  // u's strictly negative in log-space representation for random admissible inputs
  Rng rng(3, 0);
  for (int i = 0; i < 1000; ++i) {
    double a = 0.05 + 0.5 * rng.next_double();
    double t = 0.05 + 0.5 * rng.next_double();
    double s2 = -1.5 + rng.next_double();
    double s1 = s2 + 0.1 + rng.next_double();
    auto pp = ModelParams::from_at(a, t);
    auto s = scaled_inputs(pp, 50 + long(rng.next_double() * 500), s1, s2,
                           rng.next_double() - 0.5, rng.next_double() - 0.5);
    CHECK_FALSE(s.u1.is_zero);
    CHECK(s.u1.phase == 0.0);  // -u real positive, so u strictly negative
    CHECK_FALSE(s.u2.is_zero);
  }

  CHECK_THROWS_AS(scaled_inputs(p, 2, -0.1, -2.0, 0, 0), domain_error);
}
