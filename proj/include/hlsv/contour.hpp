#pragma once
// Multi-dimensional circle-contour quadrature for the prelimit series: the
// one-point series, the k-th moment residue series, the joint two-point
// t-Laplace series with its cross term, and the residue-identity verifiers.
//
// All series terms are evaluated as tensor-product trapezoidal sums over
// equispaced circle nodes with precomputed single-variable and pairwise
// factor tables; grid halving supplies the a-posteriori error estimate.

#include <functional>
#include <vector>

#include "hlsv/params.hpp"
#include "hlsv/quadrature.hpp"

namespace hlsv {

// Closed-form Cauchy determinant det[1/(z_i - w_j)], evaluated in log space.
// Throws Singular when some z_i = w_j.
cplx cauchy_det(const std::vector<cplx>& z, const std::vector<cplx>& w);

// E[ 1 / (u1 t^{-lambda'_1(N)};t)_inf ] = 1 + sum_{N1>=1} B(N1)/N1! for the
// ascending Hall-Littlewood process with x-variables X and y-variables Y.
// Uses the (r1, r2) circles of the radii config. Terms are added until
// N1_max or until they fall below tol; per-term truncation goes into
// tail_est. Throws BadRadii when the contour conditions fail.
QuadResult one_point_series(const ModelParams& p, const std::vector<double>& X,
                            const std::vector<double>& Y, const RadiiConfig& radii,
                            const LogNeg& u1, int nodes, int N1_max);

// E[ t^{-k lambda'_1(n)} / (u1 t^{-lambda'_1(N)};t)_inf ] for the homogeneous
// process with N_total x-variables and M_rows y-variables, all equal to a.
// Sum over N1 and partitions lambda of k of the residue-subspace integrals,
// with u1 = 0 reducing to the pure t-moment.
QuadResult moment_series(const ModelParams& p, int k, int n, int N_total, int M_rows,
                         const RadiiConfig& radii, const LogNeg& u1, int nodes,
                         int N1_max);

// Inputs of one joint-series evaluation. In the scaling regime these come
// from ScaledInputs; small exact-law comparisons set them directly.
struct JointConfig {
  double a = 0.0, t = 0.0;
  long M_rows = 0;  // number of y-variables
  long n1 = 0, n2 = 0;
  LogNeg u1, u2;
};

JointConfig joint_config(const ModelParams& p, const ScaledInputs& si);

// The (N1, N2) term I_M(N1, N2) of the joint series; I_M(0,0) = 1. Exact
// tensor-product summation (with a gemm fast path at N1 = N2 = 1); total
// dimension 2 N1 + 2 N2 must stay within the exact budget, larger terms are
// estimated by joint_term_IM_qmc.
QuadResult joint_term_IM(const JointConfig& cfg, int N1, int N2,
                         const RadiiConfig& radii, int nodes);

// Randomized rank-1 lattice estimate with shift spread in err_est.
QuadResult joint_term_IM_qmc(const JointConfig& cfg, int N1, int N2,
                             const RadiiConfig& radii, int points, int shifts,
                             std::uint64_t seed);

// Raw integrand of I_M at explicit node tuples (exponent-symmetry tests).
cplx joint_integrand(const JointConfig& cfg, const std::vector<cplx>& z,
                     const std::vector<cplx>& w, const std::vector<cplx>& zh,
                     const std::vector<cplx>& wh);

struct JointTerm {
  int N1 = 0, N2 = 0;
  QuadResult q;
  bool exact = true;      // false: lattice estimate
  bool skipped = false;   // bounded by the majorant instead of computed
};

struct JointSeriesResult {
  QuadResult total;
  std::vector<JointTerm> terms;
  RadiiConfig radii;
  double rho = 0.0;        // contraction factor used by the tail majorant
  bool rho_certified = false;  // true when rho satisfies the good-radii bound
};

// sum_{N1, N2 <= Ncap} I_M(N1, N2) with a tail estimate from the
// C^{N1+N2} ((1+rho)/2)^{N1^2+N2^2} majorant, constants fitted to the
// computed terms. When no good radii exist the series is evaluated on
// fallback radii and the tail fit uses the empirical shell decay.
JointSeriesResult joint_t_laplace_series(const JointConfig& cfg,
                                         const RadiiConfig& radii, int nodes,
                                         int Ncap, double tol);

// |LHS - RHS| of the nested-contour residue expansion identity for the
// product function F = prod f(z_i), contours gamma_j with radius(j) >
// q * radius(j+1).
double nested_identity_residual(int k, double q, const std::function<cplx(cplx)>& f,
                                const std::vector<double>& radii, int nodes);

// Configuration of the t-power series vs S-contour identity check:
// H(u) = sum_{c>=1} u^c/(a - z t^c) prod_k 1/(1 - z y_k t^c)
//        prod_j (1 - x_j z^{-1} t^{-c}) prod_i (z w_i^{-1} t^c;t)/(z z_i^{-1} t^c;t),
// valid for |u| < t^n, against the circle integral of the spiral kernel.
struct ExpansionCheck {
  double a_pt = 1.0;     // the constant named a in the identity
  cplx z{1.0, 0.0};
  std::vector<double> x, y;     // sizes n and M
  std::vector<cplx> w_pts, z_pts;  // size N each
  LogNeg u;
  double t = 0.5;
  double contour_radius = 0.0;  // in (t |z|, |z|); 0 = geometric mean
};

double expansion_identity_residual(const ExpansionCheck& chk, int nodes);

}  // namespace hlsv
