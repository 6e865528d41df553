#include "hlsv/quadrature.hpp"

#include <cmath>

namespace hlsv {

CircleGrid::CircleGrid(double r, int n_nodes) : radius(r), n(n_nodes) {
  if (r <= 0.0 || n_nodes < 2 || (n_nodes & (n_nodes - 1)) != 0)
    throw domain_error("CircleGrid: radius > 0 and node count a power of two");
  nodes.resize(n);
  weights.resize(n);
  for (int j = 0; j < n; ++j) {
    double th = 2.0 * PI * j / n;
    nodes[j] = r * cplx(std::cos(th), std::sin(th));
    weights[j] = nodes[j] / double(n);
  }
}

CircleGrid CircleGrid::halved() const {
  CircleGrid g(radius, n / 2);
  return g;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton from the Chebyshev-like initial guess
    double t = std::cos(PI * (i + 0.75) / (n + 0.5));
    double p0, p1;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

void gauss_legendre_ab(int n, double a, double b, std::vector<double>& x,
                       std::vector<double>& w) {
  gauss_legendre(n, x, w);
  for (int i = 0; i < n; ++i) {
    x[i] = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
    w[i] *= 0.5 * (b - a);
  }
}

LineGrid::LineGrid(double abscissa, double cutoff, double spacing) : c(abscissa) {
  if (cutoff <= 0.0 || spacing <= 0.0) throw domain_error("LineGrid: bad cutoff/spacing");
  n = 2 * static_cast<int>(std::ceil(cutoff / spacing)) + 1;
  nodes.resize(n);
  double y0 = -spacing * (n - 1) / 2.0;
  for (int j = 0; j < n; ++j) nodes[j] = cplx(c, y0 + j * spacing);
  weight = spacing / (2.0 * PI);
}

LineGrid make_vertical_line(double c, double decay_scale, double pole_margin,
                            double log_eps, double max_cutoff) {
  double D = -log_eps;
  double cut = std::min(max_cutoff, std::sqrt(D / std::max(1e-6, decay_scale)));
  double d = std::min(decay_scale, pole_margin);
  double h = 2.0 * PI * d / D;
  h = std::min(h, cut / 8.0);  // never fewer than ~16 nodes
  return LineGrid(c, cut, h);
}

}  // namespace hlsv
