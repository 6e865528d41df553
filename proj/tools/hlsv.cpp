// hlsv: numerical toolkit for the stochastic six-vertex model, the ascending
// Hall-Littlewood process, and their Airy-process limit objects.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hlsv/acceptance.hpp"
#include "hlsv/airy.hpp"
#include "hlsv/contour.hpp"
#include "hlsv/hlp.hpp"
#include "hlsv/params.hpp"
#include "hlsv/scaling.hpp"
#include "hlsv/sixvertex.hpp"

using json = nlohmann::ordered_json;
using namespace hlsv;

namespace {

constexpr const char* kVersion = "1.0.0";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// plain-text key=value config, returned as --key=value tokens
std::vector<std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("config file not found: " + path);
  std::vector<std::string> args;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (!key.empty()) args.push_back("--" + key + "=" + val);
  }
  return args;
}

json manifest(const std::string& command, const json& params, std::uint64_t seed,
              const json& results) {
  json m;
  m["tool"] = "hlsv";
  m["version"] = kVersion;
  m["command"] = command;
  m["parameters"] = params;
  m["seed"] = seed;
  m["checksum"] = hex64(fnv1a(results.dump()));
  return m;
}

void emit(const json& doc, const std::string& output) {
  if (output.empty() || output == "-") {
    std::printf("%s\n", doc.dump(2).c_str());
  } else {
    std::ofstream out(output);
    out << doc.dump(2) << "\n";
  }
}

json law_to_json(const JointHeightLaw& law) {
  json j;
  j["rows_M"] = law.M;
  j["n1"] = law.n1;
  j["n2"] = law.n2;
  j["a"] = law.a;
  j["t"] = law.t;
  j["tail_bound"] = law.tail_bound;
  j["pmf"] = law.pmf;  // pmf[c2][c1] over (lambda'_1(n2), lambda'_1(n1))
  return j;
}

json quad_to_json(const QuadResult& q) {
  json j;
  j["value_re"] = q.value.real();
  j["value_im"] = q.value.imag();
  j["err_est"] = q.err_est;
  j["tail_est"] = q.tail_est;
  return j;
}

json radii_to_json(const RadiiConfig& r) {
  return json{{"r1", r.r1}, {"r2", r.r2}, {"r3", r.r3}, {"r4", r.r4}, {"rho", r.rho}};
}

LogNeg parse_u(double re, double im) {
  if (re == 0.0 && im == 0.0) return LogNeg::zero();
  return LogNeg::from_complex(cplx(re, im));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic six-vertex / Hall-Littlewood / Airy numerics"};
  app.require_subcommand(1);

  std::string config_path, output;
  int threads = 0;
  app.add_option("--config", config_path, "key=value config file (flags override)");
  app.add_option("--output", output, "output path (default stdout)");
  app.add_option("--threads", threads, "worker cap (default: logical cores)");

  double a = 0.1, t = 0.1, b1 = 0.0, b2 = 0.0;
  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--a", a, "parameter a in (0,1)");
    cmd->add_option("--t", t, "parameter t in (0,1)");
    cmd->add_option("--b1", b1, "six-vertex b1 (alternative to a,t)");
    cmd->add_option("--b2", b2, "six-vertex b2 (alternative to a,t)");
  };
  auto get_params = [&]() {
    return (b1 > 0.0 && b2 > 0.0) ? ModelParams::from_b(b1, b2)
                                  : ModelParams::from_at(a, t);
  };

  // params-check
  double target_rho = 0.5;
  auto* c_params = app.add_subcommand("params-check", "convert parameters, search good radii");
  add_params(c_params);
  c_params->add_option("--target-rho", target_rho, "contraction target in (0,1)");

  // sample
  long M = 8, count = 1000;
  std::uint64_t seed = 1;
  std::vector<long> columns;
  auto* c_sample = app.add_subcommand("sample", "Monte Carlo height samples (CSV)");
  add_params(c_sample);
  c_sample->add_option("--M", M, "row count");
  c_sample->add_option("--columns", columns, "query columns n")->required();
  c_sample->add_option("--count", count, "number of samples");
  c_sample->add_option("--seed", seed, "RNG seed");

  // exact-law
  long n1 = 1, n2 = 1;
  auto* c_exact = app.add_subcommand("exact-law", "transfer-matrix joint height law");
  add_params(c_exact);
  c_exact->add_option("--M", M, "row count");
  c_exact->add_option("--n1", n1, "first query column");
  c_exact->add_option("--n2", n2, "second query column");

  // hl-law
  int hlN = 2, part_cap = 40;
  auto* c_hl = app.add_subcommand("hl-law", "truncated Hall-Littlewood joint law");
  add_params(c_hl);
  c_hl->add_option("--N", hlN, "ascending leg length");
  c_hl->add_option("--M", M, "descending leg length");
  c_hl->add_option("--n1", n1, "first query index");
  c_hl->add_option("--n2", n2, "second query index");
  c_hl->add_option("--part-cap", part_cap, "largest allowed part");

  // tlaplace-series
  double u1re = -0.5, u1im = 0.0, u2re = -0.25, u2im = 0.0, tol = 1e-6;
  int nodes = 32, Ncap = 4;
  long Mrows = 2;
  auto* c_tl = app.add_subcommand("tlaplace-series", "joint t-Laplace contour series");
  add_params(c_tl);
  c_tl->add_option("--M", Mrows, "number of y variables");
  c_tl->add_option("--n1", n1, "first location");
  c_tl->add_option("--n2", n2, "second location");
  c_tl->add_option("--u1-re", u1re, "Re u1");
  c_tl->add_option("--u1-im", u1im, "Im u1");
  c_tl->add_option("--u2-re", u2re, "Re u2");
  c_tl->add_option("--u2-im", u2im, "Im u2");
  c_tl->add_option("--nodes", nodes, "circle nodes (power of two)");
  c_tl->add_option("--ncap", Ncap, "series cap per index");
  c_tl->add_option("--tol", tol, "target tolerance");

  // moment-series
  int mk = 1;
  long mN = 2, mn = 1;
  auto* c_mom = app.add_subcommand("moment-series", "k-th t-moment residue series");
  add_params(c_mom);
  c_mom->add_option("--k", mk, "moment order");
  c_mom->add_option("--n", mn, "moment location");
  c_mom->add_option("--N", mN, "number of x variables");
  c_mom->add_option("--M", Mrows, "number of y variables");
  c_mom->add_option("--u1-re", u1re, "Re u1 (0 for the pure moment)");
  c_mom->add_option("--u1-im", u1im, "Im u1");
  c_mom->add_option("--nodes", nodes, "circle nodes");

  // verify-identities
  auto* c_ver = app.add_subcommand("verify-identities", "residue identity residuals");
  c_ver->add_option("--t", t, "parameter t");
  c_ver->add_option("--nodes", nodes, "circle nodes");

  // airy-cdf
  std::string method = "both";
  double x1 = 0.0, x2 = 0.0, tau1 = 0.5, tau2 = 0.0;
  auto* c_airy = app.add_subcommand("airy-cdf", "two-point Airy process CDF");
  c_airy->add_option("--method", method, "nystrom | series | both");
  c_airy->add_option("--x1", x1, "level at tau1");
  c_airy->add_option("--x2", x2, "level at tau2");
  c_airy->add_option("--tau1", tau1, "first time");
  c_airy->add_option("--tau2", tau2, "second time");
  c_airy->add_option("--ncap", Ncap, "series cap");

  // airy-series (terms, for diagnostics)
  auto* c_as = app.add_subcommand("airy-series", "contour-series terms K(N1,N2)");
  c_as->add_option("--x1", x1, "level at tau1");
  c_as->add_option("--x2", x2, "level at tau2");
  c_as->add_option("--tau1", tau1, "first time");
  c_as->add_option("--tau2", tau2, "second time");
  c_as->add_option("--ncap", Ncap, "series cap");

  // converge
  std::vector<long> M_list = {40, 80, 160, 320};
  long samples = 10000;
  double s1 = 1.5, s2 = -1.5;
  std::vector<double> grid_x;
  std::string csv_out;
  auto* c_conv = app.add_subcommand("converge", "Monte Carlo convergence experiment");
  add_params(c_conv);
  c_conv->add_option("--M-list", M_list, "row counts");
  c_conv->add_option("--samples", samples, "samples per M");
  c_conv->add_option("--s1", s1, "first scaled location");
  c_conv->add_option("--s2", s2, "second scaled location");
  c_conv->add_option("--grid", grid_x, "evaluation grid (both coordinates)");
  c_conv->add_option("--seed", seed, "RNG seed");
  c_conv->add_option("--csv", csv_out, "per-M CSV artifact path");

  // acceptance
  bool quick = false;
  auto* c_acc = app.add_subcommand("acceptance", "run the acceptance suite");
  c_acc->add_flag("--quick", quick, "reduced sampling (smoke run, not the gate)");
  c_acc->add_option("--seed", seed, "RNG seed");

  // flags override config, config overrides defaults: config tokens are
  // spliced in right after the subcommand name, and repeated options take
  // the last value
  app.fallthrough(true);
  for (auto* opt : app.get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    for (auto* opt : sc->get_options())
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string cfgpath;
    for (size_t i = 0; i < args.size(); ++i) {
      if (args[i].rfind("--config=", 0) == 0) cfgpath = args[i].substr(9);
      else if (args[i] == "--config" && i + 1 < args.size()) cfgpath = args[i + 1];
    }
    if (!cfgpath.empty() && !args.empty()) {
      auto cfg_args = read_config_file(cfgpath);
      args.insert(args.begin() + 1, cfg_args.begin(), cfg_args.end());
    }
    {
      // CLI11 consumes the vector in reverse order
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app.parse(rev);
    }
    if (threads > 0) set_max_threads(threads);

    if (c_params->parsed()) {
      auto p = get_params();
      json params = {{"a", p.a}, {"t", p.t}, {"b1", p.b1}, {"b2", p.b2},
                     {"target_rho", target_rho}};
      auto r = find_good_radii(p, target_rho);
      json res;
      res["params"] = params;
      res["good"] = r.has_value();
      if (r) res["radii"] = radii_to_json(*r);
      res["fallback_radii"] = radii_to_json(fallback_radii(p));
      res["manifest"] = manifest("params-check", params, 0, res);
      emit(res, output);
    } else if (c_sample->parsed()) {
      auto p = get_params();
      json params = {{"a", p.a}, {"t", p.t}, {"M", M}, {"columns", columns},
                     {"count", count}};
      auto samples_v = sample_heights(p, M, columns, count, seed);
      std::ostringstream csv;
      csv << "sample";
      for (long n : columns) csv << ",h_n" << n;
      csv << "\r\n";
      for (const auto& s : samples_v) {
        csv << s.index;
        for (long h : s.heights) csv << "," << h;
        csv << "\r\n";
      }
      std::string body = csv.str();
      if (output.empty() || output == "-") {
        std::fputs(body.c_str(), stdout);
      } else {
        std::ofstream out(output, std::ios::binary);
        out << body;
      }
      json res;
      res["manifest"] = manifest("sample", params, seed, json(body));
      std::fprintf(stderr, "%s\n", res["manifest"].dump().c_str());
    } else if (c_exact->parsed()) {
      auto p = get_params();
      json params = {{"a", p.a}, {"t", p.t}, {"M", M}, {"n1", n1}, {"n2", n2}};
      auto law = exact_joint_height_law(p, M, n1, n2);
      json res;
      res["law"] = law_to_json(law);
      res["manifest"] = manifest("exact-law", params, 0, res["law"]);
      emit(res, output);
    } else if (c_hl->parsed()) {
      auto p = get_params();
      json params = {{"a", p.a}, {"t", p.t}, {"N", hlN}, {"M", M},
                     {"n1", n1}, {"n2", n2}, {"part_cap", part_cap}};
      auto law = truncated_joint_law(p.a, p.t, hlN, int(M), int(n1), int(n2), part_cap);
      json res;
      res["law"] = law_to_json(law);
      res["manifest"] = manifest("hl-law", params, 0, res["law"]);
      emit(res, output);
    } else if (c_tl->parsed()) {
      auto p = get_params();
      JointConfig cfg;
      cfg.a = p.a;
      cfg.t = p.t;
      cfg.M_rows = Mrows;
      cfg.n1 = n1;
      cfg.n2 = n2;
      cfg.u1 = parse_u(u1re, u1im);
      cfg.u2 = parse_u(u2re, u2im);
      auto good = find_good_radii(p, 0.5);
      RadiiConfig radii = good ? *good : fallback_radii(p);
      auto series = joint_t_laplace_series(cfg, radii, nodes, Ncap, tol);
      json params = {{"a", p.a}, {"t", p.t}, {"M", Mrows}, {"n1", n1}, {"n2", n2},
                     {"u1", {u1re, u1im}}, {"u2", {u2re, u2im}},
                     {"nodes", nodes}, {"ncap", Ncap}};
      json res;
      res["result"] = quad_to_json(series.total);
      res["radii"] = radii_to_json(series.radii);
      res["rho_certified"] = series.rho_certified;
      json terms = json::array();
      for (auto& term : series.terms)
        terms.push_back(json{{"N1", term.N1},
                             {"N2", term.N2},
                             {"value_re", term.q.value.real()},
                             {"value_im", term.q.value.imag()},
                             {"exact", term.exact},
                             {"skipped", term.skipped}});
      res["terms"] = terms;
      res["manifest"] = manifest("tlaplace-series", params, 0, res["result"]);
      emit(res, output);
    } else if (c_mom->parsed()) {
      auto p = get_params();
      RadiiConfig base = fallback_radii(p);
      RadiiConfig radii{base.r1, 0.5 * (base.r2 + base.r3), base.r4, 0.0, 0.0};
      auto series = moment_series(p, mk, int(mn), int(mN), int(Mrows), radii,
                                  parse_u(u1re, u1im), nodes, 3);
      json params = {{"a", p.a}, {"t", p.t}, {"k", mk}, {"n", mn}, {"N", mN},
                     {"M", Mrows}, {"u1", {u1re, u1im}}, {"nodes", nodes}};
      json res;
      res["result"] = quad_to_json(series);
      res["manifest"] = manifest("moment-series", params, 0, res["result"]);
      emit(res, output);
    } else if (c_ver->parsed()) {
      auto one = [](cplx) { return cplx(1.0, 0.0); };
      auto f = [](cplx z) { return 1.0 / (1.0 - z / 5.0); };
      double r1v = nested_identity_residual(1, 2.0, one, {0.8}, nodes * 4);
      double r2v = nested_identity_residual(2, 2.0, f, {1.2, 0.5}, nodes * 4);
      ExpansionCheck chk;
      chk.t = t;
      chk.u = LogNeg::from_complex(cplx(-0.4, 0.0));
      double r3v = expansion_identity_residual(chk, nodes * 8);
      json params = {{"t", t}, {"nodes", nodes}};
      json res;
      res["nested_k1"] = r1v;
      res["nested_k2"] = r2v;
      res["expansion_minimal"] = r3v;
      res["manifest"] = manifest("verify-identities", params, 0, res);
      emit(res, output);
    } else if (c_airy->parsed() || c_as->parsed()) {
      AiryQuadConfig cfg;
      json params = {{"x1", x1}, {"x2", x2}, {"tau1", tau1}, {"tau2", tau2},
                     {"ncap", Ncap}, {"method", method}};
      json res;
      if (c_as->parsed() || method == "series" || method == "both") {
        AiryQuadConfig scfg = cfg;
        scfg.quad_eps = 1e-9;
        auto s = series_two_point_cdf(x1, x2, tau1, tau2, Ncap, scfg);
        res["series"] = quad_to_json(s.total);
        if (c_as->parsed()) {
          json terms = json::array();
          for (int i = 0; i <= Ncap; ++i)
            for (int j = 0; j <= Ncap; ++j)
              terms.push_back(json{{"N1", i}, {"N2", j},
                                   {"re", s.terms[i][j].real()},
                                   {"im", s.terms[i][j].imag()}});
          res["terms"] = terms;
        }
      }
      if (!c_as->parsed() && (method == "nystrom" || method == "both"))
        res["nystrom"] = fredholm_two_point_cdf(tau1, tau2, x1, x2, cfg);
      res["manifest"] =
          manifest(c_as->parsed() ? "airy-series" : "airy-cdf", params, 0, res);
      emit(res, output);
    } else if (c_conv->parsed()) {
      auto p = get_params();
      auto rep = convergence_experiment(p, M_list, samples, s1, s2, seed, grid_x);
      json params = {{"a", p.a}, {"t", p.t}, {"M_list", M_list},
                     {"samples", samples}, {"s1", s1}, {"s2", s2}};
      json res;
      res["tau1"] = rep.tau1;
      res["tau2"] = rep.tau2;
      res["grid"] = rep.grid_x;
      json rows = json::array();
      std::ostringstream csv;
      csv << "M,n1,n2,samples,sup_discrepancy,boot_lo,boot_hi\r\n";
      for (auto& row : rep.rows) {
        rows.push_back(json{{"M", row.M}, {"n1", row.n1}, {"n2", row.n2},
                            {"sup_discrepancy", row.sup_discrepancy},
                            {"boot_lo", row.boot_lo}, {"boot_hi", row.boot_hi},
                            {"mean_lambda1", row.mean_l1}});
        csv << row.M << "," << row.n1 << "," << row.n2 << "," << row.samples << ","
            << row.sup_discrepancy << "," << row.boot_lo << "," << row.boot_hi
            << "\r\n";
      }
      res["rows"] = rows;
      if (!csv_out.empty()) {
        std::ofstream out(csv_out, std::ios::binary);
        out << csv.str();
        res["csv"] = csv_out;
      }
      res["manifest"] = manifest("converge", params, seed, res["rows"]);
      emit(res, output);
    } else if (c_acc->parsed()) {
      AcceptanceOptions opt;
      opt.quick = quick;
      opt.seed = seed;
      auto results = run_acceptance(opt);
      bool all = true;
      for (auto& r : results) {
        std::puts(format_criterion(r).c_str());
        all = all && r.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const budget_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
