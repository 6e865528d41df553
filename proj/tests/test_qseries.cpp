#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hlsv/qseries.hpp"

using namespace hlsv;

TEST_CASE("t_pochhammer basics") {
  CHECK(std::abs(t_pochhammer(cplx(0, 0), 0.5) - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(t_pochhammer(cplx(1, 0), 0.5)) < 1e-15);
  // brute-force 200-factor product
  cplx brute(1.0, 0.0);
  double f = 0.5;
  for (int n = 0; n < 200; ++n) {
    brute *= 1.0 - cplx(f, 0.0);
    f *= 0.5;
  }
  CHECK(std::abs(t_pochhammer(cplx(0.5, 0), 0.5) - brute) < 1e-14);
}

TEST_CASE("functional identity (z;t) = (1-z)(zt;t)") {
  // the residual is relative: for t near 1 the product itself is e^{t/(1-t)}
  Rng rng(7, 0);
  for (int i = 0; i < 1000; ++i) {
    double t = 0.05 + 0.9 * rng.next_double();
    cplx z = rng.next_double() * std::exp(cplx(0.0, 2 * PI * rng.next_double()));
    cplx lhs = t_pochhammer(z, t);
    cplx rhs = (1.0 - z) * t_pochhammer(z * t, t);
    CHECK(std::abs(lhs - rhs) < 1e-13 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("t_factorial") {
  double t = 0.31;
  CHECK(t_factorial(0, t) == doctest::Approx(1.0));
  CHECK(t_factorial(2, t) == doctest::Approx(1.0 + t));
  CHECK(t_factorial(3, t) == doctest::Approx((1.0 + t) * (1.0 + t + t * t)));
}

TEST_CASE("t_gamma") {
  double t = 0.3;
  CHECK(std::abs(t_gamma(cplx(1.0, 0.0), t) - cplx(1.0, 0.0)) < 1e-13);
  // recurrence Gamma_t(x+1)/Gamma_t(x) = (1-t^x)/(1-t)
  cplx x(0.7, 0.0);
  cplx lhs = t_gamma(x + 1.0, t) / t_gamma(x, t);
  cplx rhs = (1.0 - std::pow(t, 0.7)) / (1.0 - t);
  CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("spiral function") {
  double t = 0.3;
  QTol tol;

  SUBCASE("conjugation symmetry for real negative u") {
    LogNeg u = LogNeg::from_complex(cplx(-0.7, 0.0));
    cplx w(0.4, 0.3), z(0.9, -0.5);
    cplx a = spiral_S(w, z, u, t, tol);
    cplx b = spiral_S(std::conj(w), std::conj(z), u, t, tol);
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
  }

  SUBCASE("u = 0 vanishes, u on [0,inf) rejected") {
    CHECK(std::abs(spiral_S(cplx(0.5, 0), cplx(1.0, 0), LogNeg::zero(), t)) == 0.0);
    CHECK_THROWS_AS(LogNeg::from_complex(cplx(0.5, 0.0)), domain_error);
  }

  SUBCASE("on-spiral guard") {
    LogNeg u = LogNeg::from_complex(cplx(-0.5, 0.0));
    CHECK_THROWS_AS(spiral_S(cplx(0.5, 0), cplx(0.5 / t, 0), u, t), domain_error);
  }

  SUBCASE("truncation certificate: value stable under forced deeper sums") {
    LogNeg u = LogNeg::from_complex(cplx(-0.3, 0.8));
    QTol loose{1e-12, 4000}, tight{1e-16, 40000};
    cplx a = spiral_S(cplx(0.5, 0.1), cplx(0.9, -0.2), u, t, loose);
    cplx b = spiral_S(cplx(0.5, 0.1), cplx(0.9, -0.2), u, t, tight);
    CHECK(std::abs(a - b) < 1e-11);
  }

  SUBCASE("branch invariance under log-sheet shifts") {
    // points just below and above the negative real axis: principal args
    // differ by ~2pi, the bilateral sum must not care
    LogNeg u = LogNeg::from_complex(cplx(-0.4, 0.0));
    cplx w1(-0.5, 1e-12), w2(-0.5, -1e-12);
    cplx z(0.95, 0.1);
    cplx s1 = spiral_S(w1, z, u, t), s2 = spiral_S(w2, z, u, t);
    CHECK(std::abs(s1 - s2) < 1e-9);
  }

  SUBCASE("empirical boundedness over admissible grids") {
    LogNeg u = LogNeg::from_complex(cplx(-0.2, 0.5));
    double worst = 0.0;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j) {
        double thw = 2 * PI * i / 40.0, thz = 2 * PI * j / 40.0;
        cplx w = 0.55 * std::exp(cplx(0.0, thw));
        cplx z = 1.0 * std::exp(cplx(0.0, thz));
        worst = std::max(worst, std::abs(spiral_S(w, z, u, t)));
      }
    CHECK(worst < 100.0);
  }
}

TEST_CASE("t_laplace_weight matches direct evaluation") {
  double t = 0.25;
  LogNeg u = LogNeg::from_complex(cplx(-0.35, 0.1));
  for (int ell = 0; ell <= 6; ++ell) {
    cplx direct = 1.0 / t_pochhammer(u.value() * std::pow(t, -ell), t);
    CHECK(std::abs(t_laplace_weight(u, ell, t) - direct) < 1e-12);
  }
  CHECK(std::abs(t_laplace_weight(LogNeg::zero(), 3, t) - cplx(1, 0)) < 1e-15);
}
