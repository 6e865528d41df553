#pragma once
// Stochastic six-vertex model in the quadrant with step initial data: exact
// Monte Carlo sampling of height observables and a transfer-matrix engine for
// the exact joint law of two of them.
//
// Vertex completion rules: a lone entering horizontal arrow exits
// horizontally w.p. b2, else turns up; a lone entering vertical arrow exits
// vertically w.p. b1, else turns right; zero or two entering arrows complete
// deterministically. This is the assignment consistent with
// b1 = t(1-a^2)/(1-a^2 t), b2 = (1-a^2)/(1-a^2 t) and the Hall-Littlewood
// distributional equality (the hlp module cross-checks it numerically).
//
// Height bookkeeping: lambda'_1(n) = number of vertical arrows exiting the
// top boundary of [1,n] x [1,M]; h(n+1, M) = M - lambda'_1(n).

#include <cstdint>
#include <vector>

#include "hlsv/common.hpp"
#include "hlsv/params.hpp"

namespace hlsv {

struct HeightSample {
  long M = 0;
  std::vector<long> columns;  // query columns n
  std::vector<long> heights;  // h(n+1, M) per query column
  std::uint64_t seed = 0;
  std::uint64_t index = 0;  // sample index within the run
};

// Top-exit indicators v[x], x = 1..n_max, of one configuration on the strip
// [1, n_max] x [1, M]. b1 = b2 = 1 degenerations are allowed here.
std::vector<std::uint8_t> sample_top_exits(double b1, double b2, long M, long n_max,
                                           Rng& rng);

// count i.i.d. samples of h(n+1, M) at the given query columns, reproducible
// from (seed, sample index) independently of threading.
std::vector<HeightSample> sample_heights(const ModelParams& p, long M,
                                         const std::vector<long>& columns, long count,
                                         std::uint64_t seed);

// Exact joint pmf of (lambda'_1(n2), lambda'_1(n1)), pmf[c2][c1].
struct JointHeightLaw {
  long M = 0;
  long n1 = 0, n2 = 0;
  double a = 0.0, t = 0.0;
  std::vector<std::vector<double>> pmf;
  double tail_bound = 0.0;  // 0 for the exact transfer-matrix engine

  double mass() const;
  std::vector<double> marginal_n1() const;
  std::vector<double> marginal_n2() const;
};

// Column-sweep dynamic program over (horizontal-edge bitmask, exit counters);
// O(n1 * 2^M * M * counters) time. Throws TooLarge above M_cap.
JointHeightLaw exact_joint_height_law(const ModelParams& p, long M, long n1, long n2,
                                      int M_cap = 14);

// E[ t^{-k1 L1 - k2 L2} / ((u1 t^{-L1};t)_inf (u2 t^{-L2};t)_inf) ] with
// (L2, L1) = (lambda'_1(n2), lambda'_1(n1)) distributed by the law.
cplx law_observable(const JointHeightLaw& law, double t, const LogNeg& u1,
                    const LogNeg& u2, int k1 = 0, int k2 = 0);

// Total-variation distance, treating both laws as (sub)probability tables on
// the common support rectangle.
double tv_distance(const JointHeightLaw& p, const JointHeightLaw& q);

}  // namespace hlsv
