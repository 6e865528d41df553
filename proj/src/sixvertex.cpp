#include "hlsv/sixvertex.hpp"

#include <algorithm>
#include <cmath>

#include "hlsv/qseries.hpp"

namespace hlsv {

std::vector<std::uint8_t> sample_top_exits(double b1, double b2, long M, long n_max,
                                           Rng& rng) {
  if (M < 1 || n_max < 1) throw domain_error("sample_top_exits: M, n_max >= 1");
  // v[x] = 1 iff a vertical arrow currently enters (x, y) from below.
  // A lone horizontal arrow continues horizontally w.p. b2 (else turns up),
  // a lone vertical arrow continues vertically w.p. b1 (else turns right);
  // this is the assignment forced by b1 = t(1-a^2)/(1-a^2 t),
  // b2 = (1-a^2)/(1-a^2 t) together with the Hall-Littlewood equality.
  std::vector<std::uint8_t> v(n_max, 0);
  for (long y = 0; y < M; ++y) {
    std::uint8_t h = 1;  // step data: a path enters each row from the left
    for (long x = 0; x < n_max; ++x) {
      std::uint8_t vin = v[x];
      if (h == 1 && vin == 0) {
        if (rng.bernoulli(b2)) {
          // continues horizontally
        } else {
          h = 0;
          v[x] = 1;
        }
      } else if (h == 0 && vin == 1) {
        if (rng.bernoulli(b1)) {
          // continues vertically
        } else {
          h = 1;
          v[x] = 0;
        }
      }
      // (0,0) and (1,1) pass through unchanged
    }
  }
  return v;  // after row M these are the top exits
}

std::vector<HeightSample> sample_heights(const ModelParams& p, long M,
                                         const std::vector<long>& columns, long count,
                                         std::uint64_t seed) {
  if (count < 1) throw domain_error("sample_heights: count >= 1");
  long n_max = 1;
  for (long n : columns) {
    if (n < 1) throw domain_error("sample_heights: columns must be >= 1");
    n_max = std::max(n_max, n);
  }
  std::vector<HeightSample> out(count);
  parallel_for(count, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      Rng rng(seed, static_cast<std::uint64_t>(i));
      auto v = sample_top_exits(p.b1, p.b2, M, n_max, rng);
      HeightSample s;
      s.M = M;
      s.columns = columns;
      s.seed = seed;
      s.index = static_cast<std::uint64_t>(i);
      s.heights.reserve(columns.size());
      // prefix sums of top exits give lambda'_1(n); h(n+1,M) = M - lambda'_1(n)
      std::vector<long> prefix(n_max + 1, 0);
      for (long x = 1; x <= n_max; ++x) prefix[x] = prefix[x - 1] + v[x - 1];
      for (long n : columns) s.heights.push_back(M - prefix[n]);
      out[static_cast<size_t>(i)] = std::move(s);
    }
  });
  return out;
}

namespace {

// distribution tensor indexed [mask][c2][d]; c2 tracked after column n2,
// d = additional exits. Before reaching n2 only c2 is active (d = 0).
struct Dp {
  long n_mask, n_c, n_d;
  std::vector<double> v;
  Dp(long nm, long nc, long nd) : n_mask(nm), n_c(nc), n_d(nd), v(nm * nc * nd, 0.0) {}
  double& at(long mask, long c, long d) { return v[(mask * n_c + c) * n_d + d]; }
};

}  // namespace

JointHeightLaw exact_joint_height_law(const ModelParams& p, long M, long n1, long n2,
                                      int M_cap) {
  if (!(1 <= n2 && n2 <= n1)) throw domain_error("exact_joint_height_law: need 1 <= n2 <= n1");
  if (M < 1) throw domain_error("exact_joint_height_law: M >= 1");
  if (M > M_cap) throw budget_error("TooLarge: M exceeds M_cap for the transfer matrix");

  const double b1 = p.b1, b2 = p.b2;
  const long nmask = 1L << M;
  const long nc = std::min(n2, M) + 1;
  const long nd = std::min(n1 - n2, M) + 1;

  Dp cur(nmask, nc, nd);
  cur.at(nmask - 1, 0, 0) = 1.0;  // all rows occupied by entering paths

  // advances the distribution by one column; exits recorded into c (before
  // passing column n2) or d (after)
  auto sweep_column = [&](Dp& dist, bool count_in_c) {
    // carry the vertical bit through the rows: state [mask][v][c][d]
    std::vector<double> a(nmask * 2 * nc * nd, 0.0), b(nmask * 2 * nc * nd, 0.0);
    auto idx = [&](long mask, long vv, long c, long d) {
      return ((mask * 2 + vv) * nc + c) * nd + d;
    };
    for (long mask = 0; mask < nmask; ++mask)
      for (long c = 0; c < nc; ++c)
        for (long d = 0; d < nd; ++d) {
          double w = dist.at(mask, c, d);
          if (w != 0.0) a[idx(mask, 0, c, d)] = w;
        }
    for (long y = 0; y < M; ++y) {
      std::fill(b.begin(), b.end(), 0.0);
      for (long mask = 0; mask < nmask; ++mask) {
        for (long vv = 0; vv < 2; ++vv) {
          for (long c = 0; c < nc; ++c)
            for (long d = 0; d < nd; ++d) {
              double w = a[idx(mask, vv, c, d)];
              if (w == 0.0) continue;
              long h = (mask >> y) & 1;
              if (h == 1 && vv == 0) {
                b[idx(mask, 0, c, d)] += w * b2;                  // passes right
                b[idx(mask & ~(1L << y), 1, c, d)] += w * (1 - b2);  // turns up
              } else if (h == 0 && vv == 1) {
                b[idx(mask, 1, c, d)] += w * b1;                  // passes up
                b[idx(mask | (1L << y), 0, c, d)] += w * (1 - b1);   // turns right
              } else {
                b[idx(mask, vv, c, d)] += w;  // deterministic completion
              }
            }
        }
      }
      std::swap(a, b);
    }
    // fold the top exit into the counters
    Dp next(nmask, nc, nd);
    for (long mask = 0; mask < nmask; ++mask)
      for (long c = 0; c < nc; ++c)
        for (long d = 0; d < nd; ++d) {
          double w0 = a[idx(mask, 0, c, d)];
          double w1 = a[idx(mask, 1, c, d)];
          if (w0 != 0.0) next.at(mask, c, d) += w0;
          if (w1 != 0.0) {
            if (count_in_c) {
              if (c + 1 >= nc) throw domain_error("exit counter overflow");
              next.at(mask, c + 1, d) += w1;
            } else {
              if (d + 1 >= nd) throw domain_error("exit counter overflow");
              next.at(mask, c, d + 1) += w1;
            }
          }
        }
    dist = std::move(next);
  };

  for (long x = 1; x <= n1; ++x) sweep_column(cur, x <= n2);

  JointHeightLaw law;
  law.M = M;
  law.n1 = n1;
  law.n2 = n2;
  law.a = p.a;
  law.t = p.t;
  long c1max = std::min(n1, M);
  law.pmf.assign(nc, std::vector<double>(c1max + 1, 0.0));
  for (long mask = 0; mask < nmask; ++mask)
    for (long c = 0; c < nc; ++c)
      for (long d = 0; d < nd; ++d) {
        double w = cur.at(mask, c, d);
        if (w != 0.0) law.pmf[c][c + d] += w;
      }
  return law;
}

double JointHeightLaw::mass() const {
  double s = 0.0;
  for (const auto& row : pmf)
    for (double v : row) s += v;
  return s;
}

std::vector<double> JointHeightLaw::marginal_n1() const {
  std::vector<double> m(pmf.empty() ? 0 : pmf[0].size(), 0.0);
  for (const auto& row : pmf)
    for (size_t j = 0; j < row.size(); ++j) m[j] += row[j];
  return m;
}

std::vector<double> JointHeightLaw::marginal_n2() const {
  std::vector<double> m(pmf.size(), 0.0);
  for (size_t i = 0; i < pmf.size(); ++i)
    for (double v : pmf[i]) m[i] += v;
  return m;
}

cplx law_observable(const JointHeightLaw& law, double t, const LogNeg& u1,
                    const LogNeg& u2, int k1, int k2) {
  cplx sum(0.0, 0.0);
  for (size_t c2 = 0; c2 < law.pmf.size(); ++c2) {
    cplx w2 = t_laplace_weight(u2, static_cast<int>(c2), t) *
              std::pow(t, -double(k2) * double(c2));
    for (size_t c1 = 0; c1 < law.pmf[c2].size(); ++c1) {
      double pr = law.pmf[c2][c1];
      if (pr == 0.0) continue;
      cplx w1 = t_laplace_weight(u1, static_cast<int>(c1), t) *
                std::pow(t, -double(k1) * double(c1));
      sum += pr * w1 * w2;
    }
  }
  return sum;
}

double tv_distance(const JointHeightLaw& p, const JointHeightLaw& q) {
  size_t r = std::max(p.pmf.size(), q.pmf.size());
  double tv = 0.0;
  for (size_t i = 0; i < r; ++i) {
    size_t c = std::max(i < p.pmf.size() ? p.pmf[i].size() : 0,
                        i < q.pmf.size() ? q.pmf[i].size() : 0);
    for (size_t j = 0; j < c; ++j) {
      double pv = (i < p.pmf.size() && j < p.pmf[i].size()) ? p.pmf[i][j] : 0.0;
      double qv = (i < q.pmf.size() && j < q.pmf[i].size()) ? q.pmf[i][j] : 0.0;
      tv += std::abs(pv - qv);
    }
  }
  return 0.5 * tv;
}

}  // namespace hlsv
