#include "hlsv/airy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

namespace hlsv {

namespace {

// one evaluation of Ai / Ai' by the vertical-contour formula
// Ai(s) = (1/2pi) int exp((d+iy)^3/3 - s(d+iy)) dy through d = sqrt(max(s,1))
void airy_contour_pair(double s, double& ai, double& aip) {
  const double d = std::sqrt(std::max(s, 1.0));
  const double D = 34.0;
  double Y = std::sqrt(D / d);
  double h = 2.0 * PI / (std::abs(std::min(s, 0.0)) + 2.0 * D / d + 10.0);
  double prev_ai = 1e300, prev_aip = 1e300;
  for (int pass = 0; pass < 10; ++pass) {
    long n = 2 * static_cast<long>(std::ceil(Y / h)) + 1;
    double sa = 0.0, sp = 0.0;
    for (long j = 0; j < n; ++j) {
      double y = -h * ((n - 1) / 2) + j * h;
      cplx z(d, y);
      cplx e = std::exp(z * z * z / 3.0 - s * z);
      sa += e.real();
      sp += (-z * e).real();
    }
    ai = sa * h / (2.0 * PI);
    aip = sp * h / (2.0 * PI);
    double scale = std::max(std::abs(ai), std::exp(d * d * d / 3.0 - s * d));
    if (std::abs(ai - prev_ai) < 1e-13 * scale &&
        std::abs(aip - prev_aip) < 1e-12 * std::max(1.0, std::abs(aip)))
      return;
    prev_ai = ai;
    prev_aip = aip;
    h *= 0.5;
    Y *= 1.2;
  }
}

// tabulated Ai on [-120, 30] with quintic Hermite interpolation; the second
// derivative comes from Ai'' = x Ai
struct AiryTable {
  double lo = -120.0, hi = 30.0, h = 0.005;
  std::vector<double> ai, aip;

  double eval(double x) const {
    if (x >= hi) {
      // first asymptotic correction; the value itself is ~1e-49 at x = 30
      double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
      return std::exp(-zeta) / (2.0 * std::sqrt(PI) * std::pow(x, 0.25)) *
             (1.0 - 5.0 / (72.0 * zeta));
    }
    if (x < lo) throw domain_error("AiryTable: argument below the tabulated range");
    double fi = (x - lo) / h;
    long i = std::min(static_cast<long>(fi), static_cast<long>(ai.size()) - 2);
    double u = fi - i;
    double x0 = lo + i * h;
    double f0 = ai[i], f1 = ai[i + 1], d0 = aip[i], d1 = aip[i + 1];
    double s0 = x0 * f0, s1 = (x0 + h) * f1;
    double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    double H0 = 1 - 10 * u3 + 15 * u4 - 6 * u5;
    double H1 = u - 6 * u3 + 8 * u4 - 3 * u5;
    double H2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
    double H3 = 10 * u3 - 15 * u4 + 6 * u5;
    double H4 = -4 * u3 + 7 * u4 - 3 * u5;
    double H5 = 0.5 * u3 - u4 + 0.5 * u5;
    return f0 * H0 + d0 * h * H1 + s0 * h * h * H2 + f1 * H3 + d1 * h * H4 +
           s1 * h * h * H5;
  }
};

const AiryTable& airy_table() {
  static const AiryTable table = [] {
    AiryTable t;
    long n = static_cast<long>(std::round((t.hi - t.lo) / t.h)) + 1;
    t.ai.resize(n);
    t.aip.resize(n);
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t i = lo; i < hi; ++i)
        airy_contour_pair(t.lo + i * t.h, t.ai[i], t.aip[i]);
    });
    return t;
  }();
  return table;
}

struct Panels {
  std::vector<double> x, w;
};

// composite Gauss-Legendre over [a,b] with panels of the given width
Panels panels(double a, double b, double width, int nodes_per_panel) {
  Panels p;
  int np = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  std::vector<double> gx, gw;
  for (int i = 0; i < np; ++i) {
    double pa = a + (b - a) * i / np, pb = a + (b - a) * (i + 1) / np;
    gauss_legendre_ab(12, pa, pb, gx, gw);
    p.x.insert(p.x.end(), gx.begin(), gx.end());
    p.w.insert(p.w.end(), gw.begin(), gw.end());
  }
  (void)nodes_per_panel;
  return p;
}

double kernel_impl(double tau, double xi, double tau2, double xi2,
                   const AiryQuadConfig& cfg, const AiryTable& tab) {
  double dt = tau - tau2;
  if (dt >= 0.0) {
    // integrand decays once lambda exceeds -min(xi, xi2)
    double L = cfg.lambda_cutoff + std::max(0.0, -std::min(xi, xi2));
    Panels p = panels(0.0, L, 1.0, 12);
    double s = 0.0;
    for (size_t i = 0; i < p.x.size(); ++i)
      s += p.w[i] * std::exp(-p.x[i] * dt) * tab.eval(xi + p.x[i]) *
           tab.eval(xi2 + p.x[i]);
    return s;
  }
  // tau < tau2: -int_{-inf}^0, weight e^{-lambda dt} decays like e^{-|l||dt|}
  double Ln = std::min(45.0 / (-dt), tab.lo * -1.0 - std::max(-std::min(xi, xi2), 0.0) - 2.0);
  Panels p = panels(-Ln, 0.0, 0.5, 12);
  double s = 0.0;
  for (size_t i = 0; i < p.x.size(); ++i)
    s += p.w[i] * std::exp(-p.x[i] * dt) * tab.eval(xi + p.x[i]) *
         tab.eval(xi2 + p.x[i]);
  return -s;
}

}  // namespace

double airy_ai(double x, const AiryQuadConfig&) {
  double ai, aip;
  airy_contour_pair(x, ai, aip);
  return ai;
}

double airy_ai_series(double x) {
  // Ai = alpha f - beta g with the Maclaurin solutions of Ai'' = x Ai
  const double alpha = 0.35502805388781723926;  // Ai(0)
  const double beta = 0.25881940379280679841;   // -Ai'(0)
  double x3 = x * x * x;
  double f = 1.0, tf = 1.0, g = x, tg = x;
  for (int k = 0; k < 200; ++k) {
    tf *= x3 / ((3 * k + 2) * (3 * k + 3));
    tg *= x3 / ((3 * k + 3) * (3 * k + 4));
    f += tf;
    g += tg;
    if (std::abs(tf) < 1e-18 && std::abs(tg) < 1e-18) break;
  }
  return alpha * f - beta * g;
}

double extended_kernel(double tau, double xi, double tau2, double xi2,
                       const AiryQuadConfig& cfg) {
  return kernel_impl(tau, xi, tau2, xi2, cfg, airy_table());
}

namespace {

// weighted Nystrom matrix on {tau1} x [x1, x1+L] union {tau2} x [x2, x2+L]
Eigen::MatrixXd nystrom_matrix(double tau1, double tau2, double x1, double x2,
                               const AiryQuadConfig& cfg, bool two_slices) {
  const AiryTable& tab = airy_table();
  int m = cfg.nystrom_nodes;
  std::vector<double> gx1, gw1, gx2, gw2;
  gauss_legendre_ab(m, x1, x1 + cfg.xi_window, gx1, gw1);
  if (two_slices) gauss_legendre_ab(m, x2, x2 + cfg.xi_window, gx2, gw2);
  int dim = two_slices ? 2 * m : m;
  std::vector<double> taus(dim), xs(dim), sw(dim);
  for (int i = 0; i < m; ++i) {
    taus[i] = tau1;
    xs[i] = gx1[i];
    sw[i] = std::sqrt(gw1[i]);
  }
  if (two_slices)
    for (int i = 0; i < m; ++i) {
      taus[m + i] = tau2;
      xs[m + i] = gx2[i];
      sw[m + i] = std::sqrt(gw2[i]);
    }
  Eigen::MatrixXd K(dim, dim);
  parallel_for(dim, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i)
      for (int j = 0; j < dim; ++j)
        K(i, j) = sw[i] * kernel_impl(taus[i], xs[i], taus[j], xs[j], cfg, tab) * sw[j];
  });
  return K;
}

}  // namespace

double fredholm_one_point_cdf(double x, const AiryQuadConfig& cfg) {
  Eigen::MatrixXd K = nystrom_matrix(0.0, 0.0, x, 0.0, cfg, false);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(K.rows(), K.cols()) - K;
  return A.partialPivLu().determinant();
}

double fredholm_two_point_cdf(double tau1, double tau2, double x1, double x2,
                              const AiryQuadConfig& cfg) {
  if (tau1 < tau2) throw domain_error("fredholm_two_point_cdf: tau1 >= tau2 required");
  if (tau1 == tau2) return fredholm_one_point_cdf(std::min(x1, x2), cfg);
  Eigen::MatrixXd K = nystrom_matrix(tau1, tau2, x1, x2, cfg, true);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(K.rows(), K.cols()) - K;
  return A.partialPivLu().determinant();
}

double fredholm_two_point_cdf_fde(double tau1, double tau2, double x1, double x2,
                                  int nmax, const AiryQuadConfig& cfg) {
  if (tau1 < tau2) throw domain_error("fredholm_two_point_cdf_fde: tau1 >= tau2");
  Eigen::MatrixXd K = nystrom_matrix(tau1, tau2, x1, x2, cfg, tau1 != tau2);
  // p_j = tr(K^j); Newton's identities give the elementary symmetric sums,
  // i.e. the n-fold FDE integrals on this discretization
  std::vector<double> pj(nmax + 1, 0.0);
  Eigen::MatrixXd P = K;
  for (int j = 1; j <= nmax; ++j) {
    pj[j] = P.trace();
    if (j < nmax) P = P * K;
  }
  std::vector<double> e(nmax + 1, 0.0);
  e[0] = 1.0;
  for (int n = 1; n <= nmax; ++n) {
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += (j % 2 == 1 ? 1.0 : -1.0) * e[n - j] * pj[j];
    e[n] = s / n;
  }
  double total = 0.0;
  for (int n = 0; n <= nmax; ++n) total += (n % 2 == 0 ? 1.0 : -1.0) * e[n];
  return total;
}

namespace {

struct KEngine {
  // lines: z1 (c1), w1 (c2), z2 (c3), w2 (c4)
  LineGrid lz1, lw1, lz2, lw2;
  // M[s][t] = D_st * Phi_t^T, in z-space
  Eigen::MatrixXcd M[2][2];

  static double margin_of(double c1, double c2, double c3, double c4, double dtau) {
    return std::min({c1 - c2, c3 - c4, dtau - (c3 - c2), c1 - c4 + dtau});
  }

  KEngine(double x1, double x2, double tau1, double tau2, const AiryQuadConfig& cfg,
          double h_scale) {
    if (!(tau1 > tau2)) throw domain_error("BadAbscissas: tau1 > tau2 required");
    double dtau = tau1 - tau2;
    double c1 = cfg.c1, c2 = cfg.c2, c3 = cfg.c3, c4 = cfg.c4;
    if (c1 == 0.0) c1 = 1.0;
    if (c4 == 0.0) c4 = -1.0;
    if (c3 == 0.0) c3 = std::min(1.0, 0.3 * dtau);
    if (c2 == 0.0) c2 = -std::min(1.0, 0.3 * dtau);
    if (!(c1 > 0 && c3 > 0 && c2 < 0 && c4 < 0 && c2 + tau1 > c3 + tau2))
      throw domain_error("BadAbscissas: need c1,c3 > 0 > c2,c4 and c2+tau1 > c3+tau2");

    double m_in = dtau - (c3 - c2);  // D21 pole distance
    double log_eps = std::log(cfg.quad_eps);
    auto line = [&](double c, double pole_margin) {
      LineGrid g = make_vertical_line(c, std::abs(c), pole_margin, log_eps,
                                      cfg.vertical_cutoff);
      if (h_scale != 1.0) {
        double h0 = (g.nodes[1] - g.nodes[0]).imag();
        double cut = std::abs(g.nodes.back().imag());
        g = LineGrid(c, cut, h0 * h_scale);
      }
      return g;
    };
    lz1 = line(c1, std::min(c1 - c2, c1 - c4 + dtau));
    lw1 = line(c2, std::min(c1 - c2, m_in));
    lz2 = line(c3, std::min(c3 - c4, m_in));
    lw2 = line(c4, std::min(c3 - c4, c1 - c4 + dtau));

    auto S1 = [&](cplx z) { return z * z * z / 3.0 - x1 * z; };
    auto S2 = [&](cplx z) { return z * z * z / 3.0 - x2 * z; };

    // Phi_t[i,j] = wz wi e^{S_t(z_i) - S_t(w_j)} / (z_i - w_j)
    auto phi = [&](const LineGrid& gz, const LineGrid& gw, auto&& S) {
      Eigen::MatrixXcd f(gz.n, gw.n);
      for (int i = 0; i < gz.n; ++i)
        for (int j = 0; j < gw.n; ++j)
          f(i, j) = gz.weight * gw.weight * std::exp(S(gz.nodes[i]) - S(gw.nodes[j])) /
                    (gz.nodes[i] - gw.nodes[j]);
      return f;
    };
    Eigen::MatrixXcd phi1 = phi(lz1, lw1, S1), phi2 = phi(lz2, lw2, S2);

    auto dmat = [&](const LineGrid& gz, const LineGrid& gw, cplx shift) {
      Eigen::MatrixXcd d(gz.n, gw.n);
      for (int i = 0; i < gz.n; ++i)
        for (int j = 0; j < gw.n; ++j) d(i, j) = 1.0 / (gz.nodes[i] - gw.nodes[j] + shift);
      return d;
    };
    // rows are z-variables, columns w-variables; the dtau shifts follow the
    // block structure of the determinant
    Eigen::MatrixXcd d11 = dmat(lz1, lw1, 0.0);
    Eigen::MatrixXcd d12 = dmat(lz1, lw2, dtau);
    Eigen::MatrixXcd d21 = dmat(lz2, lw1, -dtau);
    Eigen::MatrixXcd d22 = dmat(lz2, lw2, 0.0);

    M[0][0] = d11 * phi1.transpose();
    M[0][1] = d12 * phi2.transpose();
    M[1][0] = d21 * phi1.transpose();
    M[1][1] = d22 * phi2.transpose();
  }

  // trace polynomial accumulation: L[a][b] = -sum_k (1/k) sum_{words} tr
  // restricted to a <= P1, b <= P2; returns coefficient table of
  // det(I - B(x,y)) = exp(L)
  std::vector<std::vector<cplx>> series_coeffs(int P1, int P2) const {
    std::vector<std::vector<cplx>> L(P1 + 1, std::vector<cplx>(P2 + 1, cplx(0, 0)));

    auto tr_pair = [](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
      return (A.array() * B.transpose().array()).sum();
    };

    // single-letter words
    if (P1 >= 1) L[1][0] -= M[0][0].trace();
    if (P2 >= 1) L[0][1] -= M[1][1].trace();

    // DFS over words of length >= 2 with marker counts a <= P1, b <= P2;
    // prefix holds the product of the first len-1 transfer matrices, the
    // closing factor M[last][first] enters only through the trace
    const int maxlen = P1 + P2;
    std::vector<int> word;
    std::function<void(const Eigen::MatrixXcd&, int, int)> dfs =
        [&](const Eigen::MatrixXcd& prefix, int a, int b) {
          int len = static_cast<int>(word.size());
          L[a][b] -= tr_pair(prefix, M[word.back()][word.front()]) / double(len);
          if (len == maxlen) return;
          for (int nxt = 0; nxt < 2; ++nxt) {
            int na = a + (nxt == 0), nb = b + (nxt == 1);
            if (na > P1 || nb > P2) continue;
            int last = word.back();
            word.push_back(nxt);
            dfs(prefix * M[last][nxt], na, nb);
            word.pop_back();
          }
        };
    for (int f0 = 0; f0 < 2; ++f0)
      for (int f1 = 0; f1 < 2; ++f1) {
        int a = (f0 == 0) + (f1 == 0), b = (f0 == 1) + (f1 == 1);
        if (a > P1 || b > P2) continue;
        word = {f0, f1};
        dfs(M[f0][f1], a, b);
      }
    word.clear();

    // G = exp(L), truncated bivariate polynomial with L(0,0) = 0
    std::vector<std::vector<cplx>> G(P1 + 1, std::vector<cplx>(P2 + 1, cplx(0, 0)));
    G[0][0] = cplx(1.0, 0.0);
    std::vector<std::vector<cplx>> pw = G;  // L^j / j!
    for (int j = 1; j <= P1 + P2; ++j) {
      std::vector<std::vector<cplx>> nx(P1 + 1, std::vector<cplx>(P2 + 1, cplx(0, 0)));
      for (int a1 = 0; a1 <= P1; ++a1)
        for (int b1 = 0; b1 <= P2; ++b1) {
          if (pw[a1][b1] == cplx(0.0, 0.0)) continue;
          for (int a2 = 0; a2 + a1 <= P1; ++a2)
            for (int b2 = 0; b2 + b1 <= P2; ++b2)
              nx[a1 + a2][b1 + b2] += pw[a1][b1] * L[a2][b2] / double(j);
        }
      pw = nx;
      for (int a1 = 0; a1 <= P1; ++a1)
        for (int b1 = 0; b1 <= P2; ++b1) G[a1][b1] += pw[a1][b1];
    }
    return G;
  }
};

}  // namespace

QuadResult K_term(int N1, int N2, double x1, double x2, double tau1, double tau2,
                  const AiryQuadConfig& cfg) {
  if (N1 == 0 && N2 == 0) return QuadResult{cplx(1.0, 0.0), 0.0, 0.0};
  KEngine fine(x1, x2, tau1, tau2, cfg, 1.0);
  KEngine coarse(x1, x2, tau1, tau2, cfg, 1.5);
  auto gf = fine.series_coeffs(std::max(N1, 1), std::max(N2, 1));
  auto gc = coarse.series_coeffs(std::max(N1, 1), std::max(N2, 1));
  QuadResult r;
  r.value = gf[N1][N2];
  r.err_est = std::abs(gf[N1][N2] - gc[N1][N2]);
  return r;
}

AirySeriesResult series_two_point_cdf(double x1, double x2, double tau1, double tau2,
                                      int Ncap, const AiryQuadConfig& cfg) {
  KEngine fine(x1, x2, tau1, tau2, cfg, 1.0);
  KEngine coarse(x1, x2, tau1, tau2, cfg, 1.5);
  auto gf = fine.series_coeffs(Ncap, Ncap);
  auto gc = coarse.series_coeffs(Ncap, Ncap);

  AirySeriesResult res;
  res.terms = gf;
  cplx total(0.0, 0.0);
  double err = 0.0;
  double fitC = 0.0;
  for (int a = 0; a <= Ncap; ++a)
    for (int b = 0; b <= Ncap; ++b) {
      total += gf[a][b];
      err += std::abs(gf[a][b] - gc[a][b]);
      int N = a + b;
      double mag = std::abs(gf[a][b]);
      if (N >= 1 && mag > 0.0)
        fitC = std::max(fitC, std::pow(mag * std::pow(double(N), 0.5 * N), 1.0 / N));
    }
  double tail = 0.0;
  if (fitC > 0.0) {
    for (int a = 0; a <= Ncap + 40; ++a)
      for (int b = 0; b <= Ncap + 40; ++b) {
        if (a <= Ncap && b <= Ncap) continue;
        int N = a + b;
        tail += std::pow(fitC, N) * std::pow(double(N), -0.5 * N);
      }
  }
  res.total.value = total;
  res.total.err_est = err;
  res.total.tail_est = tail;
  return res;
}

}  // namespace hlsv
