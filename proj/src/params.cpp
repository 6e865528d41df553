#include "hlsv/params.hpp"

#include <cmath>
#include <vector>

#include "hlsv/qseries.hpp"

namespace hlsv {

namespace {

void check_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0))
    throw domain_error(std::string("OutOfRange: ") + name + " must lie in (0,1)");
}

}  // namespace

ModelParams ModelParams::from_at(double a, double t) {
  check_unit(a, "a");
  check_unit(t, "t");
  ModelParams p;
  p.a = a;
  p.t = t;
  double a2c = (1.0 - a) * (1.0 + a);  // 1 - a^2 without cancellation
  double den = 1.0 - a * a * t;
  double x = a2c / den, y = (1.0 - t) / den;
  p.b1 = t * x;
  p.b2 = x;
  p.b1c = y;
  p.b2c = (a * a) * y;
  return p;
}

ModelParams ModelParams::from_b(double b1, double b2) {
  check_unit(b1, "b1");
  check_unit(b2, "b2");
  if (!(b1 < b2)) throw domain_error("Inconsistent: b1 < b2 is required");
  return from_b_complements(1.0 - b1, 1.0 - b2);
}

ModelParams ModelParams::from_b_complements(double b1c, double b2c) {
  check_unit(b1c, "1-b1");
  check_unit(b2c, "1-b2");
  if (!(b2c < b1c)) throw domain_error("Inconsistent: b1 < b2 is required");
  ModelParams p;
  p.b1c = b1c;
  p.b2c = b2c;
  p.b1 = 1.0 - b1c;
  p.b2 = 1.0 - b2c;
  p.t = p.b1 / p.b2;
  p.a = std::sqrt(b2c / b1c);
  return p;
}

double radii_contraction(double r1, double r2, double r3, double r4, double t) {
  auto half = [](double s) { return std::sqrt(s) / (1.0 - s); };
  double pre = std::max(half(r2 / r1), half(r4 / r3));
  double num = std::abs(t_pochhammer(cplx(-r3 / r1, 0.0), t).real()) *
               std::abs(t_pochhammer(cplx(-r4 / r2, 0.0), t).real());
  double den = t_pochhammer(cplx(r4 / r1, 0.0), t).real() *
               t_pochhammer(cplx(r3 / r2, 0.0), t).real();
  return pre * num / den;
}

bool radii_admissible(const ModelParams& p, const RadiiConfig& r) {
  return p.a < r.r4 && r.r4 < r.r3 && r.r3 < r.r2 && r.r2 < r.r1 &&
         r.r1 < 1.0 / p.a && r.r4 > p.t * r.r1;
}

std::optional<RadiiConfig> find_good_radii(const ModelParams& p, double target_rho,
                                           const RadiiSearchBudget& budget) {
  if (!(target_rho > 0.0 && target_rho < 1.0))
    throw domain_error("OutOfRange: target_rho must lie in (0,1)");

  std::optional<RadiiConfig> best;
  auto consider = [&](double r1, double r2, double r3, double r4) {
    RadiiConfig c{r1, r2, r3, r4, 0.0};
    if (!radii_admissible(p, c)) return;
    c.rho = radii_contraction(r1, r2, r3, r4, p.t);
    if (!(c.rho <= target_rho)) return;
    if (!best || c.rho < best->rho || (c.rho == best->rho && c.r1 < best->r1)) best = c;
  };

  // one-parameter family (R^3, R, R^-1, R^-3); admissible only while
  // R^3 < 1/a and R^-6 > t
  double r_hi = std::min(std::pow(1.0 / p.a, 1.0 / 3.0), std::pow(p.t, -1.0 / 6.0));
  if (r_hi > 1.0) {
    for (int i = 0; i < budget.family_points; ++i) {
      double f = (i + 1.0) / (budget.family_points + 1.0);
      double R = 1.0 + f * (r_hi - 1.0);
      consider(R * R * R, R, 1.0 / R, 1.0 / (R * R * R));
    }
    if (best) return best;
  }

  // 4-D log-spaced grid over (a, 1/a)
  int n = budget.grid_points;
  double lo = std::log(p.a), hi = -std::log(p.a);
  std::vector<double> pts(n);
  for (int i = 0; i < n; ++i)
    pts[i] = std::exp(lo + (hi - lo) * (i + 1.0) / (n + 1.0));
  for (int i4 = 0; i4 < n; ++i4)
    for (int i3 = i4 + 1; i3 < n; ++i3)
      for (int i2 = i3 + 1; i2 < n; ++i2)
        for (int i1 = i2 + 1; i1 < n; ++i1)
          consider(pts[i1], pts[i2], pts[i3], pts[i4]);
  return best;
}

RadiiConfig fallback_radii(const ModelParams& p) {
  // geometric spacing exp(+-0.3 m), exp(+-0.1 m) around 1, shrunk until the
  // nesting constraints hold
  double m = 0.9 * std::min({1.0, -std::log(p.a) / 0.3, -std::log(p.t) / 0.6});
  RadiiConfig c;
  c.r1 = std::exp(0.30 * m);
  c.r2 = std::exp(0.10 * m);
  c.r3 = std::exp(-0.10 * m);
  c.r4 = std::exp(-0.30 * m);
  c.rho = radii_contraction(c.r1, c.r2, c.r3, c.r4, p.t);
  if (!radii_admissible(p, c)) throw domain_error("BadRadii: no nested radii exist");
  return c;
}

ScaledInputs scaled_inputs(const ModelParams& p, long M, double s1, double s2,
                           double x1, double x2) {
  if (!(s1 > s2)) throw domain_error("OutOfRange: s1 > s2 is required");
  double M23 = std::pow(double(M), 2.0 / 3.0);
  if (!(M >= 1 && M + s2 * M23 >= 1.0))
    throw domain_error("MTooSmall: require M + s2 M^{2/3} >= 1");

  ScaledInputs si;
  si.M = M;
  si.s1 = s1;
  si.s2 = s2;
  si.x1 = x1;
  si.x2 = x2;
  si.n1 = static_cast<long>(std::floor(M + s1 * M23));
  si.n2 = static_cast<long>(std::floor(M + s2 * M23));

  double a = p.a;
  si.sigma_a = std::cbrt(a) * std::cbrt(1.0 - a) / (1.0 + a);
  si.f1 = 2.0 * a / (1.0 + a);
  si.f1p = a / (1.0 + a);
  si.f1pp = -a / (2.0 * (1.0 - a * a));
  si.tau1 = s1 * std::cbrt(a) / (2.0 * std::pow(1.0 - a, 2.0 / 3.0));
  si.tau2 = s2 * std::cbrt(a) / (2.0 * std::pow(1.0 - a, 2.0 / 3.0));

  double M13 = std::cbrt(double(M));
  double logt = std::log(p.t);
  double e1 = logt * (si.f1 * M + si.sigma_a * x1 * M13 + si.f1p * (M - si.n1) +
                      0.5 * si.f1pp * s1 * s1 * M13);
  double e2 = logt * (si.f1 * M + si.sigma_a * x2 * M13 + si.f1p * (M - si.n2) +
                      0.5 * si.f1pp * s2 * s2 * M13);
  si.u1 = LogNeg::from_log(e1, 0.0);
  si.u2 = LogNeg::from_log(e2, 0.0);
  return si;
}

}  // namespace hlsv
