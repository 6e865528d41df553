#include "hlsv/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "hlsv/airy.hpp"
#include "hlsv/contour.hpp"
#include "hlsv/hlp.hpp"
#include "hlsv/params.hpp"
#include "hlsv/qseries.hpp"
#include "hlsv/scaling.hpp"
#include "hlsv/sixvertex.hpp"

namespace hlsv {

namespace {

using clock_t_ = std::chrono::steady_clock;

double chi2_quantile_999(int df) {
  // Wilson-Hilferty approximation, z_{0.999} = 3.0902
  double z = 3.090232306167814;
  double c = 2.0 / (9.0 * df);
  double v = df * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
  return v;
}

CriterionResult crit_one_point(std::uint64_t) {
  CriterionResult r{1, "prelimit-one-point", true, 0.0, 1e-8, "", 0.0};
  ModelParams p = ModelParams::from_at(0.1, 0.1);
  RadiiConfig radii{1.3, 0.75, 0.0, 0.0, 0.0};
  std::vector<LogNeg> us = {LogNeg::from_complex(cplx(-0.5, 0.0)),
                            LogNeg::from_complex(cplx(-0.1, 0.2))};
  for (int mn : {1, 2}) {
    auto law = exact_joint_height_law(p, mn, mn, mn);
    std::vector<double> X(mn, p.a), Y(mn, p.a);
    for (const auto& u : us) {
      cplx exact = law_observable(law, p.t, u, LogNeg::zero());
      QuadResult series = one_point_series(p, X, Y, radii, u, 32, 3);
      double dev = std::abs(series.value - exact);
      r.observed = std::max(r.observed, dev);
    }
  }
  r.pass = r.observed <= r.threshold;
  return r;
}

CriterionResult crit_moments(std::uint64_t) {
  CriterionResult r{2, "kth-moment", true, 0.0, 1e-8, "", 0.0};
  ModelParams p = ModelParams::from_at(0.1, 0.1);
  RadiiConfig radii{1.6, 1.0, 0.5, 0.0, 0.0};
  auto law = exact_joint_height_law(p, 2, 2, 1);
  for (int k : {1, 2}) {
    for (double uval : {0.0, -0.3}) {
      LogNeg u = uval == 0.0 ? LogNeg::zero() : LogNeg::from_complex(cplx(uval, 0.0));
      cplx exact = law_observable(law, p.t, u, LogNeg::zero(), 0, k);
      QuadResult series = moment_series(p, k, 1, 2, 2, radii, u, 32, 3);
      r.observed = std::max(r.observed, std::abs(series.value - exact));
    }
  }
  r.pass = r.observed <= r.threshold;
  return r;
}

CriterionResult crit_joint(std::uint64_t) {
  CriterionResult r{3, "joint-t-laplace", true, 0.0, 1e-6, "", 0.0};
  ModelParams p = ModelParams::from_at(0.1, 0.1);
  JointConfig cfg;
  cfg.a = p.a;
  cfg.t = p.t;
  cfg.M_rows = 2;
  cfg.n1 = 2;
  cfg.n2 = 1;
  cfg.u1 = LogNeg::from_complex(cplx(-0.5, 0.0));
  cfg.u2 = LogNeg::from_complex(cplx(-0.25, 0.0));
  auto good = find_good_radii(p, 0.5);
  RadiiConfig radii = good ? *good : fallback_radii(p);
  auto series = joint_t_laplace_series(cfg, radii, 32, 4, 1e-6);
  auto law = exact_joint_height_law(p, 2, 2, 1);
  cplx exact = law_observable(law, p.t, cfg.u1, cfg.u2);
  r.observed = std::abs(series.total.value - exact);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "tail_est=%.2e err_est=%.2e rho=%.3f%s",
                series.total.tail_est, series.total.err_est, series.rho,
                series.rho_certified ? " (certified)" : " (empirical)");
  r.detail = buf;
  r.pass = r.observed <= r.threshold && series.total.tail_est <= 1e-8;
  return r;
}

CriterionResult crit_residues(std::uint64_t) {
  CriterionResult r{4, "residue-identities", true, 0.0, 1e-10, "", 0.0};
  auto one = [](cplx) { return cplx(1.0, 0.0); };
  auto f = [](cplx z) { return 1.0 / (1.0 - z / 5.0); };
  double res1 = nested_identity_residual(1, 2.0, one, {0.8}, 256);
  double res2 = nested_identity_residual(2, 2.0, f, {1.2, 0.5}, 256);
  ExpansionCheck chk;
  chk.a_pt = 1.0;
  chk.z = cplx(1.0, 0.0);
  chk.t = 0.3;
  chk.u = LogNeg::from_complex(cplx(-0.4, 0.0));
  double res3 = expansion_identity_residual(chk, 512);
  r.observed = std::max({res1, res2, res3});
  char buf[120];
  std::snprintf(buf, sizeof(buf), "nested k=1: %.1e, k=2: %.1e, expansion: %.1e", res1,
                res2, res3);
  r.detail = buf;
  r.pass = r.observed <= r.threshold;
  return r;
}

CriterionResult crit_bbw(std::uint64_t) {
  CriterionResult r{5, "bbw-equality", true, 0.0, 0.0, "", 0.0};
  double a = 0.3, t = 0.3;
  ModelParams p = ModelParams::from_at(a, t);
  bool ok = true;
  double worst = 0.0;
  for (int N : {1, 2})
    for (int M : {1, 2}) {
      int n1 = N, n2 = std::max(1, N - 1);
      auto hl = truncated_joint_law_adaptive(a, t, N, M, n1, n2, 20);
      auto sv = exact_joint_height_law(p, M, n1, n2);
      double tv = tv_distance(hl, sv);
      double tol = std::max(1e-8, hl.tail_bound);
      worst = std::max(worst, tv - tol);
      ok = ok && tv <= tol;
    }
  r.observed = worst;
  r.threshold = 0.0;
  r.detail = "worst (TV - max(1e-8, tail_bound)) over (N,M) in {1,2}^2";
  r.pass = ok;
  return r;
}

CriterionResult crit_airy_identity(std::uint64_t) {
  CriterionResult r{6, "airy-series-vs-fredholm", true, 0.0, 1e-4, "", 0.0};
  AiryQuadConfig cfg;
  cfg.quad_eps = 1e-9;
  double fred = fredholm_two_point_cdf(0.5, 0.0, 0.0, 0.0, cfg);
  auto series = series_two_point_cdf(0.0, 0.0, 0.5, 0.0, 4, cfg);
  r.observed = std::abs(series.total.value - fred);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "series=%.8f fredholm=%.8f tail=%.1e",
                series.total.value.real(), fred, series.total.tail_est);
  r.detail = buf;
  r.pass = r.observed <= r.threshold;
  return r;
}

CriterionResult crit_term_convergence(std::uint64_t) {
  CriterionResult r{7, "term-convergence-IM-to-K", true, 0.0, 5e-3, "", 0.0};
  ModelParams p = ModelParams::from_at(0.05, 0.05);
  double s1 = 1.3, s2 = -1.3;
  ScaledInputs si0 = scaled_inputs(p, 40, s1, s2, 0.0, 0.0);
  AiryQuadConfig acfg;
  QuadResult K = K_term(1, 1, 0.0, 0.0, si0.tau1, si0.tau2, acfg);

  RadiiConfig radii = fallback_radii(p);
  std::vector<double> gaps;
  std::string detail = "|I_M - K|:";
  for (long M : {40L, 80L, 160L, 320L}) {
    ScaledInputs si = scaled_inputs(p, M, s1, s2, 0.0, 0.0);
    JointConfig cfg = joint_config(p, si);
    QuadResult im = joint_term_IM(cfg, 1, 1, radii, 128);
    double gap = std::abs(im.value - K.value);
    gaps.push_back(gap);
    char buf[48];
    std::snprintf(buf, sizeof(buf), " %.2e", gap);
    detail += buf;
  }
  bool mono = true;
  for (size_t i = 1; i < gaps.size(); ++i) mono = mono && gaps[i] < gaps[i - 1];
  r.observed = gaps.back();
  r.detail = detail;
  r.pass = mono && gaps.back() <= r.threshold;
  return r;
}

CriterionResult crit_stationarity(std::uint64_t) {
  CriterionResult r{8, "airy-marginal-stationarity", true, 0.0, 1e-8, "", 0.0};
  AiryQuadConfig cfg;
  double base = fredholm_one_point_cdf(0.0, cfg);
  double worst = 0.0;
  for (double tau : {0.0, 0.5, 1.0}) {
    double v = tau == 0.0 ? fredholm_two_point_cdf(0.0, 0.0, 0.0, 8.0, cfg)
                          : fredholm_two_point_cdf(tau, 0.0, 0.0, 8.0, cfg);
    worst = std::max(worst, std::abs(v - base));
  }
  r.observed = worst;
  r.pass = worst <= r.threshold;
  return r;
}

CriterionResult crit_invariants(std::uint64_t seed) {
  CriterionResult r{9, "invariant-suites", true, 0.0, 0.0, "", 0.0};
  std::string fails;

  // Pochhammer functional identity (z;t) = (1-z)(zt;t), relative residual
  {
    Rng rng(seed, 1);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      double t = 0.05 + 0.9 * rng.next_double();
      double rr = rng.next_double(), th = 2 * PI * rng.next_double();
      cplx z = rr * std::exp(cplx(0.0, th));
      cplx lhs = t_pochhammer(z, t);
      cplx rhs = (1.0 - z) * t_pochhammer(z * t, t);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    if (worst > 1e-13) fails += " pochhammer-identity";
  }

  // Cauchy determinant bounds on 1000 random draws, N <= 6
  {
    Rng rng(seed, 2);
    bool ok = true;
    for (int i = 0; i < 1000 && ok; ++i) {
      int N = 1 + int(rng.next_double() * 6);
      double R = 0.5 + 2.0 * rng.next_double();
      double rr = R * (0.2 + 0.7 * rng.next_double());
      std::vector<cplx> z(N), w(N);
      for (int j = 0; j < N; ++j) {
        z[j] = R * std::exp(cplx(0.0, 2 * PI * rng.next_double()));
        w[j] = rr * std::exp(cplx(0.0, 2 * PI * rng.next_double()));
      }
      double det = std::abs(cauchy_det(z, w));
      double b1 = std::pow(R, -N) * std::pow(double(N), N) *
                  std::pow(rr / R, 0.5 * N * (N - 1)) /
                  std::pow(1.0 - rr / R, double(N) * N);
      double alpha = std::sqrt(rr / R) * (0.2 + 0.75 * rng.next_double());
      double b2 = std::pow(double(N), 0.5 * N) /
                  std::pow(std::abs(R * alpha - rr / alpha), double(N)) *
                  std::pow((R * alpha + rr / alpha) / (rr + R), double(N) * N);
      ok = det <= b1 * (1 + 1e-9) && det <= b2 * (1 + 1e-9);
    }
    if (!ok) fails += " cauchy-det-bounds";
  }

  // sampler chi-square against the exact law at M <= 4
  {
    ModelParams p = ModelParams::from_at(0.2, 0.2);
    for (int M : {2, 4}) {
      long n1 = M, n2 = M - 1;
      auto law = exact_joint_height_law(p, M, n1, n2);
      long count = 100000;
      auto draws = sample_heights(p, M, {n1, n2}, count, seed + M);
      std::vector<std::vector<long>> obs(law.pmf.size(),
                                         std::vector<long>(law.pmf[0].size(), 0));
      for (auto& s : draws) {
        long l1 = M - s.heights[0], l2 = M - s.heights[1];
        obs[l2][l1]++;
      }
      double stat = 0.0;
      int cells = 0;
      for (size_t i = 0; i < law.pmf.size(); ++i)
        for (size_t j = 0; j < law.pmf[i].size(); ++j) {
          double e = law.pmf[i][j] * count;
          if (e < 5.0) continue;  // pool tiny cells out
          double d = obs[i][j] - e;
          stat += d * d / e;
          ++cells;
        }
      if (stat > chi2_quantile_999(cells - 1)) fails += " sampler-chi2";
    }
  }

  // descent monotonicity and Taylor constants
  {
    for (double a : {0.05, 0.2}) {
      DescentContours dc = make_descent_contours(a, 0.1, 1000);
      double prev_z = 0.0, prev_w = 0.0, prev_m = 0.0;
      bool mono = true;
      for (int i = 1; i <= 1000; ++i) {
        double y = PI * i / 1000.0;
        auto [Sz, Rz] = steepest_functions(a, dc.gamma_Z(y));
        auto [Sw, Rw] = steepest_functions(a, dc.gamma_W(y));
        auto [Sm, Rm] = steepest_functions(a, dc.gamma_mid(y));
        mono = mono && Sz.real() <= prev_z + 1e-12 && Sw.real() >= prev_w - 1e-12 &&
               Rm.real() <= prev_m + 1e-12;
        prev_z = Sz.real();
        prev_w = Sw.real();
        prev_m = Rm.real();
      }
      if (!mono) fails += " descent-monotonicity";

      // five-point stencils at 0
      double h = 1e-2;
      auto S = [&](double x) { return steepest_functions(a, cplx(x, 0.0)).first.real(); };
      auto Rf = [&](double x) { return steepest_functions(a, cplx(x, 0.0)).second.real(); };
      double d3 = (-S(-2 * h) + 2 * S(-h) - 2 * S(h) + S(2 * h)) / (-2 * h * h * h);
      double expect3 = 2.0 * a * (1.0 - a) / std::pow(1.0 + a, 3.0);
      double d2 = (Rf(-h) - 2 * Rf(0) + Rf(h)) / (h * h);
      double expect2 = a / std::pow(1.0 + a, 2.0);
      if (std::abs(d3 - expect3) > 1e-6 || std::abs(d2 - expect2) > 1e-6)
        fails += " taylor-constants";
    }
  }

  // t-Gamma cross-term identity, N1 = N2 = 1
  {
    Rng rng(seed, 3);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      double t = 0.2 + 0.5 * rng.next_double();
      int lam = 1 + int(rng.next_double() * 3);
      int mu = 1 + int(rng.next_double() * 3);
      double w = 0.8 + 0.4 * rng.next_double();
      double zh = w * (0.3 + 0.4 * rng.next_double());
      cplx lhs = 1.0 / (w * std::pow(t, -lam) - w) * (1.0 / (zh - zh * std::pow(t, mu)));
      cplx ratio = t_pochhammer(zh / w * std::pow(t, lam), t) *
                   t_pochhammer(zh / w * std::pow(t, mu), t) /
                   (t_pochhammer(zh / w * std::pow(t, lam + mu), t) *
                    t_pochhammer(zh / w, t));
      lhs *= ratio;
      // right side: 2x2 Cauchy determinant and t-Gamma cross ratio
      cplx Z1 = w * std::pow(t, -lam), Z2 = zh;
      cplx W1 = w, W2 = zh * std::pow(t, mu);
      cplx det = cauchy_det({Z1, Z2}, {W1, W2});
      auto logt = [&](cplx v) { return std::log(v) / std::log(t); };
      cplx g = t_gamma(1.0 + logt(zh) - logt(W1), t) *
               t_gamma(1.0 + logt(W2) - logt(Z1), t) /
               (t_gamma(1.0 + logt(zh) - logt(Z1), t) *
                t_gamma(1.0 + logt(W2) - logt(W1), t));
      worst = std::max(worst, std::abs(lhs - det * g));
    }
    r.observed = worst;
    if (worst > 1e-12) fails += " cross-term-identity";
  }

  r.detail = fails.empty() ? "all sub-suites passed" : ("failed:" + fails);
  r.pass = fails.empty();
  return r;
}

CriterionResult crit_experiment(std::uint64_t seed, bool quick) {
  CriterionResult r{10, "convergence-experiment", true, 0.0, 0.0, "", 0.0};
  ModelParams p = ModelParams::from_at(0.05, 0.05);
  long samples = quick ? 2000 : 10000;
  auto rep = convergence_experiment(p, {40, 80, 160, 320}, samples, 1.5, -1.5, seed);
  std::string detail = "sup-discrepancy:";
  for (auto& row : rep.rows) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), " M=%ld: %.4f", row.M, row.sup_discrepancy);
    detail += buf;
  }
  r.detail = detail;
  r.observed = rep.rows.back().sup_discrepancy;
  r.pass = rep.rows.back().sup_discrepancy < rep.rows.front().sup_discrepancy;
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  if (opt.threads > 0) set_max_threads(opt.threads);
  std::vector<std::function<CriterionResult()>> steps = {
      [&] { return crit_one_point(opt.seed); },
      [&] { return crit_moments(opt.seed); },
      [&] { return crit_joint(opt.seed); },
      [&] { return crit_residues(opt.seed); },
      [&] { return crit_bbw(opt.seed); },
      [&] { return crit_airy_identity(opt.seed); },
      [&] { return crit_term_convergence(opt.seed); },
      [&] { return crit_stationarity(opt.seed); },
      [&] { return crit_invariants(opt.seed); },
      [&] { return crit_experiment(opt.seed, opt.quick); },
  };
  std::vector<CriterionResult> out;
  for (auto& s : steps) {
    auto t0 = clock_t_::now();
    CriterionResult r;
    try {
      r = s();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
      r.id = int(out.size()) + 1;
      r.name = "criterion";
    }
    r.seconds = std::chrono::duration<double>(clock_t_::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_criterion(const CriterionResult& r) {
  char buf[512];
  if (r.threshold > 0.0)
    std::snprintf(buf, sizeof(buf), "%s  %2d %-28s  %.3e <= %.0e  (%.1fs)%s%s",
                  r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.observed,
                  r.threshold, r.seconds, r.detail.empty() ? "" : "  ",
                  r.detail.c_str());
  else
    std::snprintf(buf, sizeof(buf), "%s  %2d %-28s  (%.1fs)%s%s",
                  r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                  r.detail.empty() ? "" : "  ", r.detail.c_str());
  return std::string(buf);
}

}  // namespace hlsv
