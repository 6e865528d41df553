#pragma once
// Quadrature building blocks: equispaced nodes on circles (trapezoidal rule
// for periodic analytic integrands), Gauss-Legendre panels, and truncated
// vertical lines for contour integrals with Gaussian decay.

#include <vector>

#include "hlsv/common.hpp"

namespace hlsv {

// Nodes r e^{2 pi i j / n} with weights folded so that a contour integral
// int f(z) dz / (2 pi i) becomes sum_j weight_j f(node_j), weight_j = node_j/n.
struct CircleGrid {
  double radius = 0.0;
  int n = 0;
  std::vector<cplx> nodes;
  std::vector<cplx> weights;

  CircleGrid() = default;
  CircleGrid(double r, int n_nodes);
  // every other node; refinement certificates compare against this
  CircleGrid halved() const;
};

// Complex value with an a-posteriori error estimate from grid refinement and
// a series-truncation estimate.
struct QuadResult {
  cplx value{0.0, 0.0};
  double err_est = 0.0;
  double tail_est = 0.0;
};

// Gauss-Legendre nodes/weights on [-1,1]
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Gauss-Legendre mapped to [a,b]
void gauss_legendre_ab(int n, double a, double b, std::vector<double>& x,
                       std::vector<double>& w);

// Vertical line through abscissa c truncated at |Im| <= cutoff, uniform step;
// weights fold dz/(2 pi i) = dy/(2 pi). Node spacing follows the alias rule
// h ~ 2 pi d / D for integrands e^{+-z^3/3} with Gaussian decay e^{-|c| y^2},
// d the distance of the nearest singularity/saddle scale and D = -log(eps).
struct LineGrid {
  double c = 0.0;
  int n = 0;
  std::vector<cplx> nodes;
  double weight = 0.0;  // uniform h / (2 pi)

  LineGrid() = default;
  LineGrid(double abscissa, double cutoff, double spacing);
};

// spacing/cutoff choice for the rule above
LineGrid make_vertical_line(double c, double decay_scale, double pole_margin,
                            double log_eps, double max_cutoff);

}  // namespace hlsv
