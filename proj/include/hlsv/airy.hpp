#pragma once
// Airy function, extended Airy kernel, two-point Fredholm determinant of the
// Airy process, and the contour-series representation K(N1, N2) with the
// identity Q = det(I - fAf).

#include <vector>

#include "hlsv/quadrature.hpp"

namespace hlsv {

struct AiryQuadConfig {
  double lambda_cutoff = 12.0;   // positive-lambda truncation of the kernel integral
  int nystrom_nodes = 48;        // Gauss nodes per time slice
  double xi_window = 10.0;       // fAf restricted to [xi_i, xi_i + L]
  double vertical_cutoff = 12.0;  // |Im| truncation of the vertical contours
  // abscissas c1, c3 > 0 > c2, c4 with c2 + tau1 > c3 + tau2; zero means
  // pick defaults from (tau1, tau2)
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double quad_eps = 1e-11;       // alias/tail target of the line grids
};

// Ai(x) by quadrature of the vertical-line contour through the saddle scale
// sqrt(max(x,1)); adaptive refinement to ~1e-12.
double airy_ai(double x, const AiryQuadConfig& cfg = {});

// Maclaurin-series evaluation (independent oracle for tests; |x| <= ~8)
double airy_ai_series(double x);

// Extended Airy kernel A(tau, xi; tau', xi'), the lambda-integral with the
// case split on tau >= tau'.
double extended_kernel(double tau, double xi, double tau2, double xi2,
                       const AiryQuadConfig& cfg = {});

// P(A(tau1) <= x1, A(tau2) <= x2) via the block Nystrom determinant on
// {tau1,tau2} x Gauss nodes. tau1 = tau2 reduces to the one-point value at
// min(x1, x2).
double fredholm_two_point_cdf(double tau1, double tau2, double x1, double x2,
                              const AiryQuadConfig& cfg = {});

// Partial sums of the Fredholm series expansion, n <= nmax terms, on the same
// discretization (independent truncation cross-check of the determinant).
double fredholm_two_point_cdf_fde(double tau1, double tau2, double x1, double x2,
                                  int nmax, const AiryQuadConfig& cfg = {});

// One-point CDF P(A <= x) (Tracy-Widom GUE) by the same Nystrom machinery.
double fredholm_one_point_cdf(double x, const AiryQuadConfig& cfg = {});

// K(N1, N2): the (N1, N2) term of the contour-series representation, computed
// from truncated vertical-line quadrature; K(0,0) = 1. Throws BadAbscissas
// when the contour constraints fail.
QuadResult K_term(int N1, int N2, double x1, double x2, double tau1, double tau2,
                  const AiryQuadConfig& cfg = {});

struct AirySeriesResult {
  QuadResult total;
  std::vector<std::vector<cplx>> terms;  // terms[N1][N2]
};

// Q = sum_{N1,N2 <= Ncap} K(N1,N2) with a tail estimate fitted to the
// C^{N1+N2} (N1+N2)^{-(N1+N2)/2} decay of the terms.
AirySeriesResult series_two_point_cdf(double x1, double x2, double tau1, double tau2,
                                      int Ncap, const AiryQuadConfig& cfg = {});

}  // namespace hlsv
