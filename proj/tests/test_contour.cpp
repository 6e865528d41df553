#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hlsv/contour.hpp"
#include "hlsv/qseries.hpp"
#include "hlsv/sixvertex.hpp"

using namespace hlsv;

TEST_CASE("cauchy_det") {
  CHECK(std::abs(cauchy_det({cplx(2, 0)}, {cplx(1, 0)}) - cplx(1, 0)) < 1e-15);

  Rng rng(5, 0);
  for (int i = 0; i < 200; ++i) {
    std::vector<cplx> z = {cplx(rng.next_double() + 1.5, rng.next_double()),
                           cplx(rng.next_double() - 2.0, rng.next_double())};
    std::vector<cplx> w = {cplx(rng.next_double(), rng.next_double() - 1.0),
                           cplx(rng.next_double(), rng.next_double() + 0.3)};
    cplx cof = 1.0 / ((z[0] - w[0]) * (z[1] - w[1])) -
               1.0 / ((z[0] - w[1]) * (z[1] - w[0]));
    CHECK(std::abs(cauchy_det(z, w) - cof) < 1e-13 * std::max(1.0, std::abs(cof)));
  }
  CHECK_THROWS_AS(cauchy_det({cplx(1, 0)}, {cplx(1, 0)}), domain_error);
}

TEST_CASE("one-point series vs transfer-matrix oracle") {
  auto p = ModelParams::from_at(0.1, 0.1);
  RadiiConfig radii{1.3, 0.75, 0, 0, 0};

  SUBCASE("N1_max = 0 leading term") {
    auto r = one_point_series(p, {0.1}, {0.1}, radii, LogNeg::from_complex(cplx(-0.5, 0)),
                              32, 0);
    CHECK(std::abs(r.value - cplx(1, 0)) < 1e-15);
  }

  SUBCASE("M = N = 1, u1 = -0.5") {
    auto law = exact_joint_height_law(p, 1, 1, 1);
    LogNeg u = LogNeg::from_complex(cplx(-0.5, 0));
    cplx exact = law_observable(law, p.t, u, LogNeg::zero());
    auto r = one_point_series(p, {p.a}, {p.a}, radii, u, 32, 3);
    CHECK(std::abs(r.value - exact) < 1e-8);
    CHECK(r.err_est < 1e-9);
  }

  SUBCASE("grid refinement certificate") {
    LogNeg u = LogNeg::from_complex(cplx(-0.4, 0.1));
    auto a32 = one_point_series(p, {p.a, p.a}, {p.a, p.a}, radii, u, 32, 2);
    auto a64 = one_point_series(p, {p.a, p.a}, {p.a, p.a}, radii, u, 64, 2);
    CHECK(std::abs(a64.value - a32.value) <= a32.err_est * 1.5 + 1e-12);
    CHECK(std::abs(a64.value - a32.value) < 1e-10);
  }

  SUBCASE("bad radii rejected") {
    RadiiConfig bad{1.3, 0.05, 0, 0, 0};  // r2/r1 < t
    CHECK_THROWS_AS(
        one_point_series(p, {p.a}, {p.a}, bad, LogNeg::from_complex(cplx(-0.5, 0)), 32, 1),
        domain_error);
  }
}

TEST_CASE("moment series vs oracle") {
  auto p = ModelParams::from_at(0.1, 0.1);
  RadiiConfig radii{1.6, 1.0, 0.5, 0, 0};

  SUBCASE("pure moment, single vertex") {
    auto r = moment_series(p, 1, 1, 1, 1, radii, LogNeg::zero(), 32, 2);
    cplx expect(p.b2 + (1 - p.b2) / p.t, 0.0);
    CHECK(std::abs(r.value - expect) < 1e-9);
  }

  SUBCASE("k = 2 joint with u1 at the far point") {
    auto law = exact_joint_height_law(p, 2, 2, 1);
    LogNeg u = LogNeg::from_complex(cplx(-0.3, 0));
    cplx exact = law_observable(law, p.t, u, LogNeg::zero(), 0, 2);
    auto r = moment_series(p, 2, 1, 2, 2, radii, u, 32, 3);
    CHECK(std::abs(r.value - exact) < 1e-8);
  }
}

TEST_CASE("joint terms and series") {
  auto p = ModelParams::from_at(0.1, 0.1);
  RadiiConfig radii = fallback_radii(p);
  JointConfig cfg;
  cfg.a = p.a;
  cfg.t = p.t;
  cfg.M_rows = 1;
  cfg.n1 = 1;
  cfg.n2 = 1;
  cfg.u1 = LogNeg::from_complex(cplx(-0.5, 0));
  cfg.u2 = LogNeg::from_complex(cplx(-0.25, 0));

  SUBCASE("I(0,0) = 1") {
    auto r = joint_term_IM(cfg, 0, 0, radii, 32);
    CHECK(r.value == cplx(1.0, 0.0));
  }

  SUBCASE("single-vertex joint t-Laplace") {
    auto s = joint_t_laplace_series(cfg, radii, 32, 3, 1e-8);
    cplx exact = p.b2 / (t_pochhammer(cfg.u1.value(), p.t) *
                         t_pochhammer(cfg.u2.value(), p.t)) +
                 (1 - p.b2) / (t_pochhammer(cfg.u1.value() / p.t, p.t) *
                               t_pochhammer(cfg.u2.value() / p.t, p.t));
    CHECK(std::abs(s.total.value - exact) < 1e-8);
  }

  SUBCASE("u2 = 0 degenerates to the one-point series") {
    JointConfig c0 = cfg;
    c0.u2 = LogNeg::zero();
    auto s = joint_t_laplace_series(c0, radii, 32, 3, 1e-8);
    auto one = one_point_series(p, {p.a}, {p.a}, radii, cfg.u1, 32, 3);
    CHECK(std::abs(s.total.value - one.value) < 1e-10);
  }

  SUBCASE("integrand symmetric under same-group relabeling") {
    JointConfig c2 = cfg;
    c2.M_rows = 2;
    c2.n1 = 2;
    c2.n2 = 1;
    std::vector<cplx> z = {cplx(1.2, 0.3), cplx(-0.9, 0.8)};
    std::vector<cplx> w = {cplx(0.8, -0.5), cplx(-0.3, 0.9)};
    std::vector<cplx> zh = {cplx(0.6, 0.5), cplx(-0.7, -0.2)};
    std::vector<cplx> wh = {cplx(0.5, -0.4), cplx(-0.2, 0.6)};
    cplx v1 = joint_integrand(c2, z, w, zh, wh);
    std::vector<cplx> z2 = {z[1], z[0]}, w2 = {w[1], w[0]};
    cplx v2 = joint_integrand(c2, z2, w2, zh, wh);
    std::vector<cplx> zh2 = {zh[1], zh[0]}, wh2 = {wh[1], wh[0]};
    cplx v3 = joint_integrand(c2, z, w, zh2, wh2);
    CHECK(std::abs(v1 - v2) < 1e-12 * std::abs(v1));
    CHECK(std::abs(v1 - v3) < 1e-12 * std::abs(v1));
  }

  SUBCASE("value invariant under admissible radii perturbation") {
    auto s1 = joint_t_laplace_series(cfg, radii, 32, 2, 1e-8);
    RadiiConfig other = radii;
    other.r1 *= 1.07;
    other.r2 *= 0.96;
    other.r3 *= 1.04;
    other.r4 *= 0.95;
    other.rho = radii_contraction(other.r1, other.r2, other.r3, other.r4, p.t);
    auto s2 = joint_t_laplace_series(cfg, other, 32, 2, 1e-8);
    CHECK(std::abs(s1.total.value - s2.total.value) <
          10 * (s1.total.err_est + s2.total.err_est) + 1e-10);
  }

  SUBCASE("tail certificate: outermost computed shell below the majorant") {
    auto s = joint_t_laplace_series(cfg, radii, 32, 2, 1e-8);
    double edge = 0.0;
    for (auto& term : s.terms)
      if (term.N1 + term.N2 == 2 && !term.skipped)
        edge = std::max(edge, std::abs(term.q.value));
    CHECK(edge <= std::max(s.total.tail_est, 1e-12) * 1e6);  // decay sanity
    CHECK(s.total.tail_est < 1e-8);
  }
}

TEST_CASE("two-point joint law vs transfer matrix, M = 2") {
  auto p = ModelParams::from_at(0.1, 0.1);
  JointConfig cfg;
  cfg.a = p.a;
  cfg.t = p.t;
  cfg.M_rows = 2;
  cfg.n1 = 2;
  cfg.n2 = 1;
  cfg.u1 = LogNeg::from_complex(cplx(-0.5, 0));
  cfg.u2 = LogNeg::from_complex(cplx(-0.25, 0));
  auto s = joint_t_laplace_series(cfg, fallback_radii(p), 32, 3, 1e-7);
  auto law = exact_joint_height_law(p, 2, 2, 1);
  cplx exact = law_observable(law, p.t, cfg.u1, cfg.u2);
  CHECK(std::abs(s.total.value - exact) < 1e-6);
}

TEST_CASE("residue identities") {
  SUBCASE("nested, k = 1, F = 1") {
    auto one = [](cplx) { return cplx(1.0, 0.0); };
    CHECK(nested_identity_residual(1, 2.0, one, {0.8}, 128) < 1e-13);
  }
  SUBCASE("nested, k = 2, rational f") {
    auto f = [](cplx z) { return 1.0 / (1.0 - z / 5.0); };
    CHECK(nested_identity_residual(2, 2.0, f, {1.2, 0.5}, 256) < 1e-10);
  }
  SUBCASE("expansion, minimal configuration") {
    ExpansionCheck chk;
    chk.t = 0.3;
    chk.u = LogNeg::from_complex(cplx(-0.4, 0.0));
    CHECK(expansion_identity_residual(chk, 512) < 1e-10);
  }
  SUBCASE("expansion with nontrivial x, y, w, z data") {
    ExpansionCheck chk;
    chk.t = 0.35;
    chk.a_pt = 1.0;
    chk.z = cplx(1.0, 0.0);
    chk.x = {0.15, 0.08};
    chk.y = {0.2};
    chk.w_pts = {cplx(1.4, 0.2)};
    chk.z_pts = {cplx(1.8, -0.3)};
    chk.u = LogNeg::from_complex(cplx(-0.05, 0.02));  // |u| < t^2
    CHECK(expansion_identity_residual(chk, 512) < 1e-10);
  }
}
