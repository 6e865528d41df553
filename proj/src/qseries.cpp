#include "hlsv/qseries.hpp"

#include <cmath>
#include <limits>

namespace hlsv {

namespace {

void check_t(double t) {
  if (!(t > 0.0 && t < 1.0)) throw domain_error("t must lie in (0,1)");
}

}  // namespace

cplx t_pochhammer(cplx z, double t, const QTol& tol) {
  check_t(t);
  if (z == cplx(0.0, 0.0)) return cplx(1.0, 0.0);
  cplx prod(1.0, 0.0);
  double zt = std::abs(z);
  for (int n = 0; n < tol.max_terms; ++n) {
    prod *= cplx(1.0, 0.0) - z;
    z *= t;
    zt *= t;
    // |log of remaining product| <= sum_{m>n} zt t^(m-n-1)/(1-zt) once zt < 1
    if (zt < 0.5 && zt / ((1.0 - t) * (1.0 - zt)) < tol.abs_tol) return prod;
  }
  throw budget_error("Nonconvergence: t_pochhammer exhausted max_terms");
}

cplx t_pochhammer_log(cplx z, double t, const QTol& tol) {
  check_t(t);
  if (z == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
  cplx logsum(0.0, 0.0);
  double zt = std::abs(z);
  for (int n = 0; n < tol.max_terms; ++n) {
    cplx f = cplx(1.0, 0.0) - z;
    if (f == cplx(0.0, 0.0))
      return cplx(-std::numeric_limits<double>::infinity(), 0.0);
    logsum += std::log(f);
    z *= t;
    zt *= t;
    if (zt < 0.5 && zt / ((1.0 - t) * (1.0 - zt)) < tol.abs_tol) return logsum;
  }
  throw budget_error("Nonconvergence: t_pochhammer_log exhausted max_terms");
}

double t_factorial(int k, double t) {
  check_t(t);
  if (k < 0) throw domain_error("t_factorial: k must be nonnegative");
  double num = 1.0, tn = 1.0;
  for (int j = 1; j <= k; ++j) {
    tn *= t;
    num *= (1.0 - tn) / (1.0 - t);
  }
  return num;
}

cplx t_gamma(cplx x, double t, const QTol& tol) {
  check_t(t);
  cplx tx = std::exp(x * std::log(t));
  cplx den_log = t_pochhammer_log(tx, t, tol);
  if (!std::isfinite(den_log.real()))
    throw domain_error("PoleHit: (t^x;t)_inf vanishes in t_gamma");
  cplx num_log = t_pochhammer_log(cplx(t, 0.0), t, tol);
  cplx pw = (cplx(1.0, 0.0) - x) * std::log(1.0 - t);
  return std::exp(num_log - den_log + pw);
}

cplx spiral_S(cplx w, cplx z, const LogNeg& u, double t, const QTol& tol) {
  check_t(t);
  if (w == cplx(0.0, 0.0) || z == cplx(0.0, 0.0))
    throw domain_error("spiral_S: zw must be nonzero");
  if (u.is_zero) return cplx(0.0, 0.0);

  const double logt = std::log(t);
  // spiral guard: |z| = t^n |w| for the nearest integer n
  const double ratio = (std::log(std::abs(z)) - std::log(std::abs(w))) / logt;
  if (std::abs(ratio - std::round(ratio)) * std::abs(logt) < 1e-12)
    throw domain_error("OnSpiral: |z| within 1e-12 relative of t^n |w|");

  const cplx A = (std::log(w) - std::log(z)) / logt;
  const double B = -2.0 * PI / logt;  // > 0

  // log sin(zeta), stable for large |Im zeta|
  auto log_sin = [](cplx zeta) {
    double y = zeta.imag();
    if (y > 30.0) return cplx(0.0, 1.0) * (-zeta) + cplx(std::log(0.5), PI / 2.0);
    if (y < -30.0) return cplx(0.0, 1.0) * zeta + cplx(std::log(0.5), -PI / 2.0);
    return std::log(std::sin(zeta));
  };

  auto term = [&](long m) {
    cplx s = A + cplx(0.0, m * B);
    return PI * std::exp(s * u.log_neg() - log_sin(-PI * s));
  };

  cplx sum = term(0);
  // geometric tail ratio e^{(|phase|-pi) B} < 1
  const double q = std::exp((std::abs(u.phase) - PI) * B);
  const double scale = std::max(1.0, std::abs(sum));
  for (long m = 1; m <= tol.max_terms; ++m) {
    cplx tp = term(m), tm = term(-m);
    sum += tp + tm;
    double mag = std::abs(tp) + std::abs(tm);
    if (mag * q / (1.0 - q) < tol.abs_tol * std::max(scale, std::abs(sum))) return sum;
  }
  throw budget_error("Nonconvergence: spiral_S exhausted max_terms");
}

cplx t_laplace_weight(const LogNeg& u, int ell, double t, const QTol& tol) {
  check_t(t);
  if (u.is_zero) return cplx(1.0, 0.0);
  // u t^{-ell} in log space
  cplx logarg = u.log_neg() - double(ell) * std::log(t);
  if (logarg.real() > 600.0) return cplx(0.0, 0.0);  // weight underflows
  cplx arg = -std::exp(logarg);
  cplx lg = t_pochhammer_log(arg, t, tol);
  if (!std::isfinite(lg.real())) throw domain_error("PoleHit: t_laplace_weight at a Pochhammer zero");
  return std::exp(-lg);
}

}  // namespace hlsv
