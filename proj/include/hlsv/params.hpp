#pragma once
// Model parameters of the stochastic six-vertex / Hall-Littlewood coupling,
// the good-radii search for the nested contour family, and the asymptotic
// scaling inputs.

#include <optional>

#include "hlsv/common.hpp"

namespace hlsv {

// Coupled parameter pairs: t = b1/b2 and a^2 = (1-b2)/(1-b1), equivalently
// b1 = t(1-a^2)/(1-a^2 t), b2 = (1-a^2)/(1-a^2 t). All four lie in (0,1)
// and 0 < b1 < b2 < 1. The complements 1-b1, 1-b2 are carried explicitly:
// b2 approaches 1 quickly for small a, and the inverse map needs them at
// full precision.
struct ModelParams {
  double a = 0.0;
  double t = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double b1c = 0.0;  // 1 - b1 = (1-t)/(1-a^2 t)
  double b2c = 0.0;  // 1 - b2 = a^2 (1-t)/(1-a^2 t)

  static ModelParams from_at(double a, double t);
  static ModelParams from_b(double b1, double b2);
  static ModelParams from_b_complements(double b1c, double b2c);
};

// Four nested contour radii a < r4 < r3 < r2 < r1 < 1/a with r4 > t r1, and
// the contraction factor
//   rho = max( sqrt(r2/r1)/(1-r2/r1), sqrt(r4/r3)/(1-r4/r3) )
//         * (-r3/r1;t)_inf (-r4/r2;t)_inf / ( (r4/r1;t)_inf (r3/r2;t)_inf ).
// The pair (a,t) is good when radii with rho < 1 exist.
struct RadiiConfig {
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  double rho = 0.0;
};

// Left side of the contraction condition at the given radii.
double radii_contraction(double r1, double r2, double r3, double r4, double t);

// True iff the nesting constraints hold (rho is not checked here).
bool radii_admissible(const ModelParams& p, const RadiiConfig& r);

struct RadiiSearchBudget {
  int family_points = 400;    // one-parameter family (R^3, R, R^-1, R^-3)
  int grid_points = 10;       // per dimension of the 4-D log-spaced fallback
};

// Searches the paper's one-parameter family first, then a 4-D log-spaced
// grid. Returns the admissible config with smallest rho <= target_rho, ties
// broken by smaller rho then smaller r1; empty when none exists in budget.
std::optional<RadiiConfig> find_good_radii(const ModelParams& p, double target_rho,
                                           const RadiiSearchBudget& budget = {});

// Valid nested radii clustered near 1 for use when (a,t) is not good; every
// prelimit term is still well defined on these contours.
RadiiConfig fallback_radii(const ModelParams& p);

// Scaled observation points and t-Laplace arguments of the KPZ regime:
//   n_i = floor(M + s_i M^{2/3}),
//   log(-u_i) = log t * ( f1 M + sigma_a x_i M^{1/3} + f1' (M - n_i)
//                         + (1/2) f1'' s_i^2 M^{1/3} ),
// with sigma_a = a^{1/3}(1-a)^{1/3}/(1+a), f1 = 2a/(1+a), f1' = a/(1+a),
// f1'' = -a/(2(1-a^2)), tau_i = s_i a^{1/3} / (2 (1-a)^{2/3}).
struct ScaledInputs {
  long M = 0;
  double s1 = 0.0, s2 = 0.0;
  double x1 = 0.0, x2 = 0.0;
  long n1 = 0, n2 = 0;
  LogNeg u1, u2;          // always negative reals, stored in log space
  double sigma_a = 0.0;
  double f1 = 0.0, f1p = 0.0, f1pp = 0.0;
  double tau1 = 0.0, tau2 = 0.0;
};

ScaledInputs scaled_inputs(const ModelParams& p, long M, double s1, double s2,
                           double x1, double x2);

}  // namespace hlsv
