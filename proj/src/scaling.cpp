#include "hlsv/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "hlsv/sixvertex.hpp"

namespace hlsv {

std::pair<cplx, cplx> steepest_functions(double a, cplx z) {
  if (!(a > 0.0 && a < 1.0)) throw domain_error("steepest_functions: a in (0,1)");
  cplx ep = a * std::exp(z), em = a * std::exp(-z);
  auto on_cut = [](cplx v) { return v.imag() == 0.0 && v.real() <= -1.0; };
  if (on_cut(ep) || on_cut(em))
    throw domain_error("BranchCut: 1 + a e^{+-z} lies on the log cut");
  cplx lp = std::log(1.0 + ep), lm = std::log(1.0 + em);
  cplx S = lp - lm - 2.0 * a * z / (1.0 + a);
  cplx R = lm - std::log(1.0 + a) + a * z / (1.0 + a);
  return {S, R};
}

DescentContours make_descent_contours(double a, double t, int monotone_samples) {
  if (!(t > 0.0 && t < 1.0)) throw domain_error("make_descent_contours: t in (0,1)");
  double A_hi = std::min(1.0 / std::sqrt(3.0), -std::log(t) / (20.0 * PI));
  if (A_hi <= 0.0) throw domain_error("make_descent_contours: no admissible slope");

  auto monotone_ok = [&](double A) {
    // sampled version of the descent inequalities for Re S_a along the rays
    double prev_z = 0.0, prev_w = 0.0;
    for (int i = 1; i <= monotone_samples; ++i) {
      double y = PI * i / monotone_samples;
      double vz = steepest_functions(a, cplx(A * y, y)).first.real();
      double vw = steepest_functions(a, cplx(-A * y, y)).first.real();
      if (vz > prev_z + 1e-12 || vw < prev_w - 1e-12) return false;
      prev_z = vz;
      prev_w = vw;
    }
    return true;
  };

  double A = A_hi * (1.0 - 1e-9);
  for (int halvings = 0; halvings < 40; ++halvings) {
    if (monotone_ok(A)) {
      DescentContours c;
      c.A = A;
      c.a = a;
      c.t = t;
      return c;
    }
    A *= 0.5;
  }
  throw budget_error("make_descent_contours: slope search exhausted");
}

ConvergenceReport convergence_experiment(const ModelParams& p,
                                         const std::vector<long>& M_list, long samples,
                                         double s1, double s2, std::uint64_t seed,
                                         const std::vector<double>& grid_x,
                                         int bootstrap, const AiryQuadConfig& airy_cfg) {
  if (samples < 10) throw domain_error("convergence_experiment: samples too small");
  ConvergenceReport rep;
  rep.params = p;
  rep.s1 = s1;
  rep.s2 = s2;
  rep.seed = seed;
  rep.grid_x = grid_x.empty() ? std::vector<double>{-1.5, -0.75, 0.0, 0.75, 1.5}
                              : grid_x;

  // Airy reference, shared across all M
  {
    ScaledInputs si0 = scaled_inputs(p, M_list.front(), s1, s2, 0.0, 0.0);
    rep.tau1 = si0.tau1;
    rep.tau2 = si0.tau2;
  }
  const size_t G = rep.grid_x.size();
  std::vector<std::vector<double>> airy_ref(G, std::vector<double>(G, 0.0));
  for (size_t i = 0; i < G; ++i)
    for (size_t j = 0; j < G; ++j)
      airy_ref[i][j] = fredholm_two_point_cdf(rep.tau1, rep.tau2, rep.grid_x[i],
                                              rep.grid_x[j], airy_cfg);

  for (long M : M_list) {
    ScaledInputs si = scaled_inputs(p, M, s1, s2, 0.0, 0.0);
    std::vector<long> cols = {si.n1, si.n2};
    auto draws = sample_heights(p, M, cols, samples, seed);

    double M13 = std::cbrt(double(M));
    auto xm = [&](long l1) {
      return (double(l1) - si.f1 * M - si.f1p * double(M - si.n1) -
              0.5 * si.f1pp * s1 * s1 * M13) /
             (si.sigma_a * M13);
    };
    auto ym = [&](long l2) {
      return (double(l2) - si.f1 * M - si.f1p * double(M - si.n2) -
              0.5 * si.f1pp * s2 * s2 * M13) /
             (si.sigma_a * M13);
    };

    std::vector<double> X(samples), Y(samples);
    double mean_l1 = 0.0;
    for (long i = 0; i < samples; ++i) {
      long l1 = M - draws[i].heights[0];  // lambda'_1(n1)
      long l2 = M - draws[i].heights[1];
      X[i] = xm(l1);
      Y[i] = ym(l2);
      mean_l1 += double(l1);
    }
    mean_l1 /= double(samples);

    ConvergenceRow row;
    row.M = M;
    row.n1 = si.n1;
    row.n2 = si.n2;
    row.samples = samples;
    row.mean_l1 = mean_l1;

    auto sup_disc = [&](const std::vector<double>& wts) {
      double sup = 0.0;
      for (size_t i = 0; i < G; ++i)
        for (size_t j = 0; j < G; ++j) {
          double emp = 0.0, tot = 0.0;
          for (long k = 0; k < samples; ++k) {
            tot += wts[k];
            if (X[k] <= rep.grid_x[i] && Y[k] <= rep.grid_x[j]) emp += wts[k];
          }
          sup = std::max(sup, std::abs(emp / tot - airy_ref[i][j]));
        }
      return sup;
    };

    std::vector<double> ones(samples, 1.0);
    for (size_t i = 0; i < G; ++i)
      for (size_t j = 0; j < G; ++j) {
        double emp = 0.0;
        for (long k = 0; k < samples; ++k)
          if (X[k] <= rep.grid_x[i] && Y[k] <= rep.grid_x[j]) emp += 1.0;
        ConvergencePoint pt;
        pt.x1 = rep.grid_x[i];
        pt.x2 = rep.grid_x[j];
        pt.empirical = emp / double(samples);
        pt.airy = airy_ref[i][j];
        row.grid.push_back(pt);
        row.sup_discrepancy =
            std::max(row.sup_discrepancy, std::abs(pt.empirical - pt.airy));
      }

    // multinomial bootstrap band for the sup discrepancy
    std::vector<double> boots;
    boots.reserve(bootstrap);
    for (int b = 0; b < bootstrap; ++b) {
      Rng rng(seed ^ 0x9e3779b97f4a7c15ULL, 777 + b);
      std::vector<double> w(samples, 0.0);
      for (long k = 0; k < samples; ++k) {
        long idx = std::min<long>(samples - 1, static_cast<long>(rng.next_double() * samples));
        w[idx] += 1.0;
      }
      boots.push_back(sup_disc(w));
    }
    std::sort(boots.begin(), boots.end());
    row.boot_lo = boots[static_cast<size_t>(0.05 * (bootstrap - 1))];
    row.boot_hi = boots[static_cast<size_t>(0.95 * (bootstrap - 1))];

    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace hlsv
