#pragma once
// Steepest-descent diagnostics S_a, R_a, the descent-contour family, and the
// Monte Carlo convergence experiment toward the two-point Airy law.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "hlsv/airy.hpp"
#include "hlsv/params.hpp"

namespace hlsv {

// S_a(z) = log(1 + a e^z) - log(1 + a e^{-z}) - 2az/(1+a),
// R_a(z) = log(1 + a e^{-z}) - log(1 + a) + az/(1+a), principal logs.
// Throws BranchCut when 1 + a e^{+-z} hits the cut (-inf, 0].
std::pair<cplx, cplx> steepest_functions(double a, cplx z);

// Piecewise-linear descent contours in the strip |Re| <= A pi. The slope A is
// the largest value on a halving grid satisfying: sampled monotonicity of
// Re S_a along the rays, atan(1/A) > pi/3, and A pi < -log(t)/20.
struct DescentContours {
  double A = 0.0;
  double a = 0.0, t = 0.0;
  // rays gamma_W = {-A|y| + iy}, gamma_Z = {A|y| + iy}, gamma_mid = {iy}
  cplx gamma_W(double y) const { return cplx(-A * std::abs(y), y); }
  cplx gamma_Z(double y) const { return cplx(A * std::abs(y), y); }
  cplx gamma_mid(double y) const { return cplx(0.0, y); }
};

DescentContours make_descent_contours(double a, double t, int monotone_samples = 256);

struct ConvergencePoint {
  double x1 = 0.0, x2 = 0.0;
  double empirical = 0.0;  // P(X_M <= x1, Y_M <= x2), Monte Carlo
  double airy = 0.0;       // P(A(tau1) <= x1, A(tau2) <= x2)
};

struct ConvergenceRow {
  long M = 0;
  long n1 = 0, n2 = 0;
  long samples = 0;
  double sup_discrepancy = 0.0;
  double boot_lo = 0.0, boot_hi = 0.0;  // bootstrap band for the sup discrepancy
  std::vector<ConvergencePoint> grid;
  double mean_l1 = 0.0;  // empirical mean of lambda'_1(n1), centering check
};

struct ConvergenceReport {
  ModelParams params;
  double s1 = 0.0, s2 = 0.0;
  double tau1 = 0.0, tau2 = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> grid_x;  // evaluation grid, used for both coordinates
  std::vector<ConvergenceRow> rows;
};

// Samples the six-vertex model at the scaled columns for each M, forms
// X_M = sigma_a^{-1} M^{-1/3} (lambda'_1(n1) - f1 M - f1'(M - n1)
//        - (1/2) f1'' s1^2 M^{1/3}) and likewise Y_M, and compares the joint
// empirical CDF with the Airy reference on the grid.
ConvergenceReport convergence_experiment(const ModelParams& p,
                                         const std::vector<long>& M_list, long samples,
                                         double s1, double s2, std::uint64_t seed,
                                         const std::vector<double>& grid_x = {},
                                         int bootstrap = 200,
                                         const AiryQuadConfig& airy_cfg = {});

}  // namespace hlsv
