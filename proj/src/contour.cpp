#include "hlsv/contour.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "hlsv/partition.hpp"
#include "hlsv/qseries.hpp"

namespace hlsv {

cplx cauchy_det(const std::vector<cplx>& z, const std::vector<cplx>& w) {
  const size_t N = z.size();
  if (w.size() != N) throw domain_error("cauchy_det: size mismatch");
  if (N == 0) return cplx(1.0, 0.0);
  cplx logsum(0.0, 0.0);
  for (size_t i = 0; i < N; ++i)
    for (size_t j = i + 1; j < N; ++j)
      logsum += std::log(z[i] - z[j]) + std::log(w[j] - w[i]);
  for (size_t i = 0; i < N; ++i)
    for (size_t j = 0; j < N; ++j) {
      cplx d = z[i] - w[j];
      if (d == cplx(0.0, 0.0)) throw domain_error("Singular: z_i = w_j in cauchy_det");
      logsum -= std::log(d);
    }
  return std::exp(logsum);
}

namespace {

cplx det_small(Eigen::MatrixXcd m) { return m.determinant(); }

// one (z-circle, w-circle) pair group with factor tables; weights folded into
// the single-variable values
struct Group {
  CircleGrid gz, gw;
  std::vector<cplx> vz, vw;   // weight * single factor per node
  std::vector<cplx> spair;    // spair[k*n+j] = S(w_k, z_j; u, t) / (-log t * w_k)
  int n = 0;
  bool u_zero = false;

  cplx pair_value(int j, int k) const { return vz[j] * vw[k] * spair[size_t(k) * n + j]; }
};

Group make_group(double r_z, double r_w, int nodes, double t, const LogNeg& u,
                 const std::function<cplx(cplx)>& fz,
                 const std::function<cplx(cplx)>& fw) {
  Group g;
  g.gz = CircleGrid(r_z, nodes);
  g.gw = CircleGrid(r_w, nodes);
  g.n = nodes;
  g.u_zero = u.is_zero;
  g.vz.resize(nodes);
  g.vw.resize(nodes);
  for (int j = 0; j < nodes; ++j) g.vz[j] = g.gz.weights[j] * fz(g.gz.nodes[j]);
  for (int k = 0; k < nodes; ++k) g.vw[k] = g.gw.weights[k] * fw(g.gw.nodes[k]);
  g.spair.assign(size_t(nodes) * nodes, cplx(0.0, 0.0));
  if (!u.is_zero) {
    const double mlogt = -std::log(t);
    parallel_for(nodes, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t k = lo; k < hi; ++k)
        for (int j = 0; j < nodes; ++j)
          g.spair[size_t(k) * nodes + j] =
              spiral_S(g.gw.nodes[k], g.gz.nodes[j], u, t) / (mlogt * g.gw.nodes[k]);
    });
  }
  return g;
}

// Cauchy determinant over selected nodes, product form
cplx det_cauchy_sel(const Group& g, const int* js, const int* ks, int N) {
  cplx num(1.0, 0.0), den(1.0, 0.0);
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b)
      num *= (g.gz.nodes[js[a]] - g.gz.nodes[js[b]]) *
             (g.gw.nodes[ks[b]] - g.gw.nodes[ks[a]]);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) den *= g.gz.nodes[js[a]] - g.gw.nodes[ks[b]];
  return num / den;
}

// multiset-representative sum over one group: equals (1/N1!) times the full
// ordered tensor integral. "extra" multiplies each pair value (cross-term
// folding); pass nullptr for none.
cplx group_term(const Group& g, int N1, const std::vector<cplx>* extra) {
  if (N1 == 0) return cplx(1.0, 0.0);
  if (g.u_zero) return cplx(0.0, 0.0);
  const int n = g.n;
  auto pv = [&](int j, int k) {
    cplx v = g.pair_value(j, k);
    return extra ? v * (*extra)[size_t(j) * n + k] : v;
  };

  std::vector<cplx> partial(n, cplx(0.0, 0.0));
  if (N1 == 1) {
    for (int j = 0; j < n; ++j) {
      cplx s(0.0, 0.0);
      for (int k = 0; k < n; ++k)
        s += pv(j, k) / (g.gz.nodes[j] - g.gw.nodes[k]);
      partial[j] = s;
    }
  } else if (N1 == 2) {
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t j1 = lo; j1 < hi; ++j1) {
        cplx s(0.0, 0.0);
        for (int j2 = int(j1) + 1; j2 < n; ++j2)
          for (int k1 = 0; k1 < n; ++k1) {
            cplx v1 = pv(int(j1), k1);
            if (v1 == cplx(0.0, 0.0)) continue;
            for (int k2 = 0; k2 < n; ++k2) {
              if (k2 == k1) continue;
              int js[2] = {int(j1), j2}, ks[2] = {k1, k2};
              s += v1 * pv(j2, k2) * det_cauchy_sel(g, js, ks, 2);
            }
          }
        partial[j1] = s;
      }
    });
  } else if (N1 == 3) {
    parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t j1 = lo; j1 < hi; ++j1) {
        cplx s(0.0, 0.0);
        for (int j2 = int(j1) + 1; j2 < n; ++j2)
          for (int j3 = j2 + 1; j3 < n; ++j3)
            for (int k1 = 0; k1 < n; ++k1) {
              cplx v1 = pv(int(j1), k1);
              if (v1 == cplx(0.0, 0.0)) continue;
              for (int k2 = 0; k2 < n; ++k2) {
                if (k2 == k1) continue;
                cplx v12 = v1 * pv(j2, k2);
                for (int k3 = 0; k3 < n; ++k3) {
                  if (k3 == k1 || k3 == k2) continue;
                  int js[3] = {int(j1), j2, j3}, ks[3] = {k1, k2, k3};
                  s += v12 * pv(j3, k3) * det_cauchy_sel(g, js, ks, 3);
                }
              }
            }
        partial[j1] = s;
      }
    });
  } else {
    throw budget_error("BudgetExceeded: exact tensor sum supports N1 <= 3");
  }
  cplx sum(0.0, 0.0);
  for (const cplx& v : partial) sum += v;
  return sum;
}

void check_t_param(double t) {
  if (!(t > 0.0 && t < 1.0)) throw domain_error("t must lie in (0,1)");
}

}  // namespace

QuadResult one_point_series(const ModelParams& p, const std::vector<double>& X,
                            const std::vector<double>& Y, const RadiiConfig& radii,
                            const LogNeg& u1, int nodes, int N1_max) {
  check_t_param(p.t);
  const double r1 = radii.r1, r2 = radii.r2;
  if (!(r1 > p.a && r2 > 0.0 && r2 < 1.0 / p.a && r2 / r1 > p.t && r2 < r1))
    throw domain_error("BadRadii: need r1 > a, r2 < 1/a, t < r2/r1 < 1");
  for (double x : X)
    if (std::abs(x) > p.a + 1e-12) throw domain_error("one_point_series: |x_i| <= a");
  for (double y : Y)
    if (std::abs(y) > p.a + 1e-12) throw domain_error("one_point_series: |y_j| <= a");

  auto fz = [&](cplx z) {
    cplx v(1.0, 0.0);
    for (double y : Y) v *= 1.0 - y * z;
    for (double x : X) v /= 1.0 - x / z;
    return v;
  };
  auto fw = [&](cplx w) {
    cplx v(1.0, 0.0);
    for (double x : X) v *= 1.0 - x / w;
    for (double y : Y) v /= 1.0 - y * w;
    return v;
  };

  auto eval = [&](int nn, QuadResult& out) {
    Group g = make_group(r1, r2, nn, p.t, u1, fz, fw);
    cplx sum(1.0, 0.0);
    double tail = 0.0;
    for (int N1 = 1; N1 <= N1_max; ++N1) {
      cplx term = group_term(g, N1, nullptr);
      sum += term;
      tail = std::abs(term);
      if (tail < 1e-13 * std::max(1.0, std::abs(sum))) break;
    }
    out.value = sum;
    out.tail_est = tail;
  };

  QuadResult full, half;
  eval(nodes, full);
  eval(nodes / 2, half);
  full.err_est = std::abs(full.value - half.value);
  return full;
}

QuadResult moment_series(const ModelParams& p, int k, int n, int N_total, int M_rows,
                         const RadiiConfig& radii, const LogNeg& u1, int nodes,
                         int N1_max) {
  check_t_param(p.t);
  if (!(k >= 1 && 1 <= n && n <= N_total))
    throw domain_error("moment_series: need k >= 1, 1 <= n <= N_total");
  const double r1 = radii.r1, r2 = radii.r2, r3 = radii.r3;
  if (!(1.0 / p.a > r1 && r1 > r2 && r2 > r3 && r3 > p.a && r3 / r1 > p.t))
    throw domain_error("BadRadii: need 1/a > r1 > r2 > r3 > a and r3/r1 > t");

  const double a = p.a, t = p.t;
  auto fz = [&](cplx z) {
    return std::pow(1.0 - a * z, double(M_rows)) / std::pow(1.0 - a / z, double(N_total));
  };
  auto fw = [&](cplx w) {
    return std::pow(1.0 - a / w, double(N_total)) / std::pow(1.0 - a * w, double(M_rows));
  };

  auto eval = [&](int nn, QuadResult& out) {
    Group g = make_group(r1, r2, nn, t, u1, fz, fw);
    CircleGrid gh(r3, nn);

    cplx total(0.0, 0.0);
    double tail = 0.0;

    for (const Partition& lam : partitions_of(k)) {
      const int ell = lam.length();
      double clam = std::pow(1.0 / t - 1.0, k) * t_factorial(k, t);
      for (int j = 1; j <= (lam.length() ? lam.parts()[0] : 0); ++j) {
        int m = lam.multiplicity(j);
        for (int f = 2; f <= m; ++f) clam /= f;
      }

      // per-slot single factors and cross tables against z / w nodes
      std::vector<std::vector<cplx>> gslot(ell, std::vector<cplx>(nn));
      std::vector<std::vector<cplx>> xz(ell), xw(ell);
      for (int i = 0; i < ell; ++i) {
        double tl = std::pow(t, lam.parts()[i]);
        for (int m = 0; m < nn; ++m) {
          cplx zh = gh.nodes[m];
          gslot[i][m] = gh.weights[m] *
                        std::pow((1.0 - zh * a) / (1.0 - zh * tl * a), double(M_rows)) *
                        std::pow((1.0 - (a / tl) / zh) / (1.0 - a / zh), double(n));
        }
        if (!u1.is_zero) {
          xz[i].resize(size_t(nn) * nn);
          xw[i].resize(size_t(nn) * nn);
          for (int m = 0; m < nn; ++m)
            for (int jn = 0; jn < nn; ++jn) {
              cplx rz = gh.nodes[m] / g.gz.nodes[jn];
              cplx rw = gh.nodes[m] / g.gw.nodes[jn];
              xz[i][size_t(m) * nn + jn] =
                  t_pochhammer(rz, t) / t_pochhammer(rz * tl, t);
              xw[i][size_t(m) * nn + jn] =
                  t_pochhammer(rw * tl, t) / t_pochhammer(rw, t);
            }
        }
      }

      // iterate hat tuples (full tensor; ell is at most k)
      std::vector<int> hat(ell, 0);
      cplx lam_sum(0.0, 0.0);
      for (;;) {
        // hat determinant det[1/(zh_j t^{-lam_i} - zh_i)]
        Eigen::MatrixXcd hd(ell, ell);
        for (int i = 0; i < ell; ++i)
          for (int j = 0; j < ell; ++j)
            hd(i, j) = 1.0 / (gh.nodes[hat[j]] * std::pow(t, -lam.parts()[i]) -
                              gh.nodes[hat[i]]);
        cplx hatval = ell ? det_small(hd) : cplx(1.0, 0.0);
        for (int i = 0; i < ell; ++i) hatval *= gslot[i][hat[i]];

        if (hatval != cplx(0.0, 0.0)) {
          cplx local = hatval;  // the N1 = 0 term
          if (!u1.is_zero) {
            // cross factors folded into the pair table of the (z,w) group
            std::vector<cplx> extra(size_t(nn) * nn);
            for (int jn = 0; jn < nn; ++jn)
              for (int kn = 0; kn < nn; ++kn) {
                cplx c(1.0, 0.0);
                for (int i = 0; i < ell; ++i)
                  c *= xz[i][size_t(hat[i]) * nn + jn] * xw[i][size_t(hat[i]) * nn + kn];
                extra[size_t(jn) * nn + kn] = c;
              }
            for (int N1 = 1; N1 <= N1_max; ++N1) {
              cplx term = hatval * group_term(g, N1, &extra);
              local += term;
              if (std::abs(term) < 1e-14 * std::max(1.0, std::abs(local))) break;
            }
          }
          lam_sum += local;
        }

        int d = ell - 1;
        for (; d >= 0; --d) {
          if (++hat[d] < nn) break;
          hat[d] = 0;
        }
        if (d < 0) break;
      }
      total += clam * lam_sum;
    }

    out.value = total;
    out.tail_est = tail;
  };

  QuadResult full, half;
  eval(nodes, full);
  eval(nodes / 2, half);
  full.err_est = std::abs(full.value - half.value);
  return full;
}

JointConfig joint_config(const ModelParams& p, const ScaledInputs& si) {
  JointConfig c;
  c.a = p.a;
  c.t = p.t;
  c.M_rows = si.M;
  c.n1 = si.n1;
  c.n2 = si.n2;
  c.u1 = si.u1;
  c.u2 = si.u2;
  return c;
}

namespace {

struct CrossTables {
  // numerator/denominator Pochhammers between the two groups, n x n each
  Eigen::MatrixXcd gzz, gww, gwz, gzw;  // (hat-node, plain-node)
};

CrossTables make_cross(const Group& ga, const Group& gb, double t) {
  const int n = ga.n;
  CrossTables ct;
  ct.gzz.resize(n, n);
  ct.gww.resize(n, n);
  ct.gwz.resize(n, n);
  ct.gzw.resize(n, n);
  parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t m = lo; m < hi; ++m)
      for (int j = 0; j < n; ++j) {
        ct.gzz(m, j) = t_pochhammer(gb.gz.nodes[m] / ga.gz.nodes[j], t);
        ct.gww(m, j) = t_pochhammer(gb.gw.nodes[m] / ga.gw.nodes[j], t);
        ct.gwz(m, j) = t_pochhammer(gb.gw.nodes[m] / ga.gz.nodes[j], t);
        ct.gzw(m, j) = t_pochhammer(gb.gz.nodes[m] / ga.gw.nodes[j], t);
      }
  });
  return ct;
}

Group joint_group(const JointConfig& cfg, double r_z, double r_w, int nodes, long nloc,
                  const LogNeg& u) {
  const double a = cfg.a;
  const double M = double(cfg.M_rows);
  auto fz = [=](cplx z) {
    return std::exp(M * std::log(1.0 - a * z) - double(nloc) * std::log(1.0 - a / z));
  };
  auto fw = [=](cplx w) {
    return std::exp(double(nloc) * std::log(1.0 - a / w) - M * std::log(1.0 - a * w));
  };
  return make_group(r_z, r_w, nodes, cfg.t, u, fz, fw);
}

// exact (1,1) contraction: for each z-node j build the hat-side bilinear form
// and contract with one gemm
cplx joint_term_11(const Group& ga, const Group& gb, const CrossTables& ct) {
  const int n = ga.n;
  Eigen::MatrixXcd VB(n, n);  // (zh-node m, wh-node l)
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      VB(m, l) = gb.pair_value(m, l) / (gb.gz.nodes[m] - gb.gw.nodes[l]);

  std::vector<cplx> partial(n, cplx(0.0, 0.0));
  parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
    Eigen::MatrixXcd E(n, n), C(n, n);
    for (std::int64_t j = lo; j < hi; ++j) {
      for (int m = 0; m < n; ++m) {
        cplx zz = ct.gzz(m, j);
        for (int l = 0; l < n; ++l) E(m, l) = VB(m, l) * zz / ct.gwz(l, j);
      }
      C.noalias() = E * ct.gww.matrix();
      cplx s(0.0, 0.0);
      for (int k = 0; k < n; ++k) {
        cplx inner(0.0, 0.0);
        for (int m = 0; m < n; ++m) inner += C(m, k) / ct.gzw(m, k);
        s += ga.pair_value(int(j), k) / (ga.gz.nodes[j] - ga.gw.nodes[k]) * inner;
      }
      partial[j] = s;
    }
  });
  cplx sum(0.0, 0.0);
  for (const cplx& v : partial) sum += v;
  return sum;
}

// general exact term: outer loop over the smaller group's configurations,
// cross factors folded into the other group's pair table
cplx joint_term_general(const Group& ga, const Group& gb, const CrossTables& ct, int N1,
                        int N2) {
  if (N2 == 0) return group_term(ga, N1, nullptr);
  if (N1 == 0) return group_term(gb, N2, nullptr);
  const int n = ga.n;

  // enumerate the B-group multiset representatives (m sorted, l distinct)
  cplx total(0.0, 0.0);
  std::vector<int> ms(N2), ls(N2);
  std::function<void(int, int, cplx)> loop_b = [&](int depth, int m_lo, cplx vb) {
    if (depth == N2) {
      int js[4], ks[4];
      for (int i = 0; i < N2; ++i) js[i] = ms[i], ks[i] = ls[i];
      cplx detb = det_cauchy_sel(gb, js, ks, N2);
      // fold cross into the A-side pair table
      std::vector<cplx> extra(size_t(n) * n);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          cplx c(1.0, 0.0);
          for (int b = 0; b < N2; ++b)
            c *= ct.gzz(ms[b], j) * ct.gww(ls[b], k) /
                 (ct.gwz(ls[b], j) * ct.gzw(ms[b], k));
          extra[size_t(j) * n + k] = c;
        }
      total += vb * detb * group_term(ga, N1, &extra);
      return;
    }
    for (int m = m_lo; m < n; ++m)
      for (int l = 0; l < n; ++l) {
        bool used = false;
        for (int i = 0; i < depth; ++i) used = used || ls[i] == l;
        if (used) continue;
        ms[depth] = m;
        ls[depth] = l;
        loop_b(depth + 1, m + 1, vb * gb.pair_value(m, l));
      }
  };
  loop_b(0, 0, cplx(1.0, 0.0));
  return total;
}

}  // namespace

cplx joint_integrand(const JointConfig& cfg, const std::vector<cplx>& z,
                     const std::vector<cplx>& w, const std::vector<cplx>& zh,
                     const std::vector<cplx>& wh) {
  const size_t N1 = z.size(), N2 = zh.size();
  if (w.size() != N1 || wh.size() != N2) throw domain_error("joint_integrand: sizes");
  const double a = cfg.a, t = cfg.t;
  const double mlogt = -std::log(t);
  cplx v = cauchy_det(z, w) * cauchy_det(zh, wh);
  for (size_t i = 0; i < N1; ++i) {
    v *= spiral_S(w[i], z[i], cfg.u1, t) / (mlogt * w[i]);
    v *= std::exp(double(cfg.M_rows) * (std::log(1.0 - a * z[i]) - std::log(1.0 - a * w[i])) +
                  double(cfg.n1) * (std::log(1.0 - a / w[i]) - std::log(1.0 - a / z[i])));
  }
  for (size_t i = 0; i < N2; ++i) {
    v *= spiral_S(wh[i], zh[i], cfg.u2, t) / (mlogt * wh[i]);
    v *= std::exp(double(cfg.M_rows) * (std::log(1.0 - a * zh[i]) - std::log(1.0 - a * wh[i])) +
                  double(cfg.n2) * (std::log(1.0 - a / wh[i]) - std::log(1.0 - a / zh[i])));
  }
  for (size_t i = 0; i < N1; ++i)
    for (size_t j = 0; j < N2; ++j)
      v *= t_pochhammer(zh[j] / z[i], t) * t_pochhammer(wh[j] / w[i], t) /
           (t_pochhammer(wh[j] / z[i], t) * t_pochhammer(zh[j] / w[i], t));
  return v;
}

QuadResult joint_term_IM(const JointConfig& cfg, int N1, int N2,
                         const RadiiConfig& radii, int nodes) {
  if (N1 == 0 && N2 == 0) return QuadResult{cplx(1.0, 0.0), 0.0, 0.0};
  if (2 * (N1 + N2) > 6 && !(N1 == 1 && N2 == 1))
    throw budget_error("BudgetExceeded: exact tensor budget is 2(N1+N2) <= 6");

  auto eval = [&](int nn) {
    Group ga = joint_group(cfg, radii.r1, radii.r2, nn, cfg.n1, cfg.u1);
    Group gb = joint_group(cfg, radii.r3, radii.r4, nn, cfg.n2, cfg.u2);
    if ((N1 > 0 && ga.u_zero) || (N2 > 0 && gb.u_zero)) return cplx(0.0, 0.0);
    if (N1 == 0) return group_term(gb, N2, nullptr);
    if (N2 == 0) return group_term(ga, N1, nullptr);
    CrossTables ct = make_cross(ga, gb, cfg.t);
    if (N1 == 1 && N2 == 1) return joint_term_11(ga, gb, ct);
    return joint_term_general(ga, gb, ct, N1, N2);
  };

  QuadResult r;
  r.value = eval(nodes);
  r.err_est = std::abs(r.value - eval(nodes / 2));
  return r;
}

QuadResult joint_term_IM_qmc(const JointConfig& cfg, int N1, int N2,
                             const RadiiConfig& radii, int points, int shifts,
                             std::uint64_t seed) {
  const int d = 2 * (N1 + N2);
  if (d == 0) return QuadResult{cplx(1.0, 0.0), 0.0, 0.0};
  // Korobov rank-1 lattice
  std::vector<double> gen(d);
  {
    double alpha = 1.0;
    for (int i = 0; i < d; ++i) {
      gen[i] = alpha;
      alpha = std::fmod(alpha * 1571.0, double(points));
    }
  }
  double fact = 1.0;
  for (int f = 2; f <= N1; ++f) fact *= f;
  for (int f = 2; f <= N2; ++f) fact *= f;

  std::vector<cplx> est(shifts, cplx(0.0, 0.0));
  for (int s = 0; s < shifts; ++s) {
    Rng rng(seed, 1000 + s);
    std::vector<double> shift(d);
    for (auto& x : shift) x = rng.next_double();
    cplx acc(0.0, 0.0);
    std::vector<cplx> z(N1), w(N1), zh(N2), wh(N2);
    for (int i = 0; i < points; ++i) {
      int q = 0;
      auto angle = [&](double r) {
        double x = std::fmod(gen[q] * i / points + shift[q], 1.0);
        ++q;
        return r * std::exp(cplx(0.0, 2.0 * PI * x));
      };
      cplx nodefactor(1.0, 0.0);
      for (int a = 0; a < N1; ++a) {
        z[a] = angle(radii.r1);
        nodefactor *= z[a];
      }
      for (int a = 0; a < N1; ++a) {
        w[a] = angle(radii.r2);
        nodefactor *= w[a];
      }
      for (int a = 0; a < N2; ++a) {
        zh[a] = angle(radii.r3);
        nodefactor *= zh[a];
      }
      for (int a = 0; a < N2; ++a) {
        wh[a] = angle(radii.r4);
        nodefactor *= wh[a];
      }
      acc += joint_integrand(cfg, z, w, zh, wh) * nodefactor;
    }
    est[s] = acc / double(points) / fact;
  }
  cplx mean(0.0, 0.0);
  for (auto& e : est) mean += e;
  mean /= double(shifts);
  double spread = 0.0;
  for (auto& e : est) spread = std::max(spread, std::abs(e - mean));
  QuadResult r;
  r.value = mean;
  r.err_est = spread;
  return r;
}

JointSeriesResult joint_t_laplace_series(const JointConfig& cfg,
                                         const RadiiConfig& radii, int nodes,
                                         int Ncap, double tol) {
  JointSeriesResult res;
  res.radii = radii;
  res.rho = radii.rho;
  res.rho_certified = radii.rho < 1.0;
  const double q_major = res.rho_certified ? 0.5 * (1.0 + radii.rho) : 0.0;

  cplx total(1.0, 0.0);  // (0,0) term
  double err = 0.0, tail = 0.0;
  res.terms.push_back(JointTerm{0, 0, QuadResult{cplx(1.0, 0.0), 0.0, 0.0}, true, false});

  double fitC = 0.0;           // majorant constant fitted from computed terms
  double shell_prev = 0.0, shell_ratio = 0.0;
  auto majorant = [&](int a, int b, double qm) {
    if (qm <= 0.0 || fitC <= 0.0) return 1e300;
    return std::pow(fitC, a + b) * std::pow(qm, double(a) * a + double(b) * b);
  };

  for (int s = 1; s <= 2 * Ncap; ++s) {
    double shell_max = 0.0;
    for (int N1 = 0; N1 <= std::min(s, Ncap); ++N1) {
      int N2 = s - N1;
      if (N2 > Ncap || N2 < 0) continue;
      JointTerm term;
      term.N1 = N1;
      term.N2 = N2;
      double qm = res.rho_certified ? q_major : (shell_ratio > 0 ? shell_ratio : 0.0);
      if (2 * (N1 + N2) <= 6 || (N1 == 1 && N2 == 1)) {
        term.q = joint_term_IM(cfg, N1, N2, radii, nodes);
      } else if (majorant(N1, N2, qm) < 0.01 * tol) {
        term.q.value = cplx(0.0, 0.0);
        term.q.tail_est = majorant(N1, N2, qm);
        term.skipped = true;
        tail += term.q.tail_est;
      } else {
        term.q = joint_term_IM_qmc(cfg, N1, N2, radii, 4096, 3, 12345);
        term.exact = false;
      }
      if (!term.skipped) {
        total += term.q.value;
        err += term.q.err_est;
        double mag = std::abs(term.q.value);
        shell_max = std::max(shell_max, mag);
        if (mag > 0.0) {
          double qf = res.rho_certified ? q_major : 0.5;
          double c = std::pow(mag / std::pow(qf, double(N1) * N1 + double(N2) * N2),
                              1.0 / (N1 + N2));
          fitC = std::max(fitC, c);
        }
      }
      res.terms.push_back(term);
    }
    if (shell_prev > 0.0 && shell_max > 0.0)
      shell_ratio = std::max(shell_ratio, shell_max / shell_prev);
    shell_prev = shell_max;
  }

  // truncation tail beyond the cap from the fitted majorant
  double qm = res.rho_certified ? q_major : std::min(0.9, std::max(shell_ratio, 1e-12));
  if (fitC > 0.0) {
    for (int N1 = 0; N1 <= Ncap + 30; ++N1)
      for (int N2 = 0; N2 <= Ncap + 30; ++N2) {
        if (N1 <= Ncap && N2 <= Ncap) continue;
        double m = std::pow(fitC, N1 + N2) * std::pow(qm, double(N1) * N1 + double(N2) * N2);
        tail += m;
      }
  }

  res.total.value = total;
  res.total.err_est = err;
  res.total.tail_est = tail;
  return res;
}

double nested_identity_residual(int k, double q, const std::function<cplx(cplx)>& f,
                                const std::vector<double>& radii, int nodes) {
  if (k < 1 || int(radii.size()) != k)
    throw domain_error("BadContours: need one radius per contour");
  for (int i = 0; i + 1 < k; ++i)
    if (!(radii[i] > q * radii[i + 1]))
      throw domain_error("BadContours: gamma_A must contain q gamma_B for A < B");

  std::vector<CircleGrid> grids;
  for (int i = 0; i < k; ++i) grids.emplace_back(radii[i], nodes);

  // left side
  cplx lhs(0.0, 0.0);
  std::vector<int> idx(k, 0);
  for (;;) {
    std::vector<cplx> zv(k);
    for (int i = 0; i < k; ++i) zv[i] = grids[i].nodes[idx[i]];
    cplx val(1.0, 0.0);
    for (int A = 0; A < k; ++A)
      for (int B = A + 1; B < k; ++B) val *= (zv[A] - zv[B]) / (zv[A] - q * zv[B]);
    for (int i = 0; i < k; ++i) val *= f(zv[i]) / double(nodes);
    lhs += val;
    int d = k - 1;
    for (; d >= 0; --d) {
      if (++idx[d] < nodes) break;
      idx[d] = 0;
    }
    if (d < 0) break;
  }

  // right side
  cplx rhs(0.0, 0.0);
  const CircleGrid& gk = grids[k - 1];
  for (const Partition& lam : partitions_of(k)) {
    int ell = lam.length();
    double kq = 1.0, qn = 1.0;
    for (int j = 1; j <= k; ++j) {
      qn *= q;
      kq *= (1.0 - qn) / (1.0 - q);
    }
    double pref = std::pow(1.0 - q, k) * std::pow(-1.0, k) *
                  std::pow(q, -0.5 * k * (k - 1)) * kq;
    for (int j = 1; j <= (ell ? lam.parts()[0] : 0); ++j) {
      int m = lam.multiplicity(j);
      for (int fm = 2; fm <= m; ++fm) pref /= fm;
    }

    std::vector<int> hid(ell, 0);
    cplx lam_sum(0.0, 0.0);
    for (;;) {
      std::vector<cplx> wv(ell);
      for (int i = 0; i < ell; ++i) wv[i] = gk.nodes[hid[i]];
      cplx val(1.0, 0.0);
      for (int i = 0; i < ell; ++i) {
        cplx acc(1.0, 0.0);
        cplx arg = wv[i];
        for (int s = 0; s < lam.parts()[i]; ++s) {
          acc *= f(arg);
          arg *= q;
        }
        val *= acc * gk.weights[hid[i]];
      }
      Eigen::MatrixXcd d(ell, ell);
      for (int i = 0; i < ell; ++i)
        for (int j = 0; j < ell; ++j)
          d(i, j) = 1.0 / (wv[i] * std::pow(q, lam.parts()[i]) - wv[j]);
      val *= det_small(d);
      lam_sum += val;
      int dd = ell - 1;
      for (; dd >= 0; --dd) {
        if (++hid[dd] < nodes) break;
        hid[dd] = 0;
      }
      if (dd < 0) break;
    }
    rhs += pref * lam_sum;
  }
  return std::abs(lhs - rhs);
}

double expansion_identity_residual(const ExpansionCheck& chk, int nodes) {
  const double t = chk.t;
  check_t_param(t);
  const int n = int(chk.x.size());
  if (chk.u.is_zero) throw domain_error("BadU: the expansion check needs u != 0");
  if (!(chk.u.log_mag < n * std::log(t)))
    throw domain_error("expansion_identity_residual: requires |u| < t^n");

  // series side
  cplx series(0.0, 0.0);
  cplx u = chk.u.value();
  cplx uc(1.0, 0.0);
  for (int c = 1; c < 4000; ++c) {
    uc *= u;
    double tc = std::pow(t, c);
    cplx term = uc / (chk.a_pt - chk.z * tc);
    for (double y : chk.y) term /= 1.0 - chk.z * y * tc;
    for (double x : chk.x) term *= 1.0 - x / chk.z * std::pow(t, -c);
    for (size_t i = 0; i < chk.w_pts.size(); ++i)
      term *= t_pochhammer(chk.z / chk.w_pts[i] * tc, t) /
              t_pochhammer(chk.z / chk.z_pts[i] * tc, t);
    series += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(series)) && c > 8) break;
  }

  // contour side
  double r = chk.contour_radius > 0.0 ? chk.contour_radius
                                      : std::abs(chk.z) * std::sqrt(t);
  if (!(r > t * std::abs(chk.z) && r < std::abs(chk.z)))
    throw domain_error("BadContours: radius must lie in (t|z|, |z|)");
  CircleGrid g(r, nodes);
  cplx integral(0.0, 0.0);
  const double mlogt = -std::log(t);
  for (int j = 0; j < g.n; ++j) {
    cplx w = g.nodes[j];
    cplx val = spiral_S(chk.z, w, chk.u, t) / (w * (chk.a_pt - w) * mlogt);
    for (double y : chk.y) val /= 1.0 - w * y;
    for (double x : chk.x) val *= 1.0 - x / w;
    for (size_t i = 0; i < chk.w_pts.size(); ++i)
      val *= t_pochhammer(w / chk.w_pts[i], t) / t_pochhammer(w / chk.z_pts[i], t);
    integral += g.weights[j] * val;
  }
  return std::abs(series - integral);
}

}  // namespace hlsv
