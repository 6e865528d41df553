#include "hlsv/hlp.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace hlsv {

namespace {

// all partitions lambda with lambda >= mu (horizontal strip) and lambda_1 <= cap
void strips_above(const Partition& mu, int cap, std::vector<Partition>& out) {
  out.clear();
  std::vector<int> parts;
  int len = mu.length();
  // choose lambda_1 in [mu_1, cap], lambda_i in [mu_i, mu_{i-1}], and an
  // optional new part lambda_{len+1} in [1, mu_len]
  std::vector<int> cur(len + 1, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == len + 1) {
      // optional new bottom row
      out.emplace_back(std::vector<int>(cur.begin(), cur.begin() + len));
      int hi = len == 0 ? cap : mu.part(len);
      for (int v = 1; v <= hi; ++v) {
        cur[len] = v;
        out.emplace_back(std::vector<int>(cur.begin(), cur.begin() + len + 1));
      }
      cur[len] = 0;
      return;
    }
    int lo = mu.part(i);
    int hi = (i == 1) ? cap : std::min(cap, mu.part(i - 1));
    for (int v = lo; v <= hi; ++v) {
      cur[i - 1] = v;
      rec(i + 1);
    }
  };
  if (len == 0) {
    out.emplace_back();
    for (int v = 1; v <= cap; ++v) out.emplace_back(std::vector<int>{v});
    return;
  }
  rec(1);
}

}  // namespace

double chain_weight(const HLChain& chain, double a, double t) {
  if (!(a > 0.0 && a < 1.0 && t > 0.0 && t < 1.0))
    throw domain_error("chain_weight: a, t must lie in (0,1)");
  if (chain.ascending.empty() || chain.descending.empty())
    throw domain_error("InvalidChain: both legs must be nonempty");
  if (chain.ascending.front().length() != 0 || chain.descending.front().length() != 0)
    throw domain_error("InvalidChain: legs must start at the empty partition");
  if (!(chain.descending.back() == chain.ascending.back()))
    throw domain_error("InvalidChain: descending leg must end at lambda(N)");

  int N = static_cast<int>(chain.ascending.size()) - 1;
  int M = static_cast<int>(chain.descending.size()) - 1;
  double a2 = a * a;
  double w = std::pow((1.0 - a2) / (1.0 - t * a2), double(N) * double(M));
  for (int i = 1; i <= N; ++i) {
    auto c = strip_coeffs(chain.ascending[i], chain.ascending[i - 1], t);
    if (!c.horizontal) throw domain_error("InvalidChain: ascending step not a strip");
    w *= c.psi * std::pow(a, double(chain.ascending[i].weight() -
                                    chain.ascending[i - 1].weight()));
  }
  for (int i = 1; i <= M; ++i) {
    auto c = strip_coeffs(chain.descending[i], chain.descending[i - 1], t);
    if (!c.horizontal) throw domain_error("InvalidChain: descending step not a strip");
    w *= c.phi * std::pow(a, double(chain.descending[i].weight() -
                                    chain.descending[i - 1].weight()));
  }
  return w;
}

JointHeightLaw truncated_joint_law(double a, double t, int N, int M, int n1, int n2,
                                   int part_cap, const TruncatedLawOptions& opt) {
  if (!(1 <= n2 && n2 <= n1 && n1 <= N))
    throw domain_error("truncated_joint_law: need 1 <= n2 <= n1 <= N");
  if (part_cap < 1) throw domain_error("truncated_joint_law: part_cap >= 1");

  long steps = 0;
  auto budget = [&]() {
    if (++steps > opt.chain_budget)
      throw budget_error("Budget: chain enumeration exceeded the configured cap");
  };

  // Q_lambda(a,...,a) with M variables, memoized over lambda
  std::map<std::vector<int>, double> qmemo;
  std::function<double(const Partition&, int)> qval = [&](const Partition& lam,
                                                          int vars) -> double {
    if (vars == 0) return lam.length() == 0 ? 1.0 : 0.0;
    if (lam.length() > vars) return 0.0;
    std::vector<int> key = lam.parts();
    key.push_back(-vars);
    auto it = qmemo.find(key);
    if (it != qmemo.end()) return it->second;
    // sum over mu <= lam (lam/mu a horizontal strip): Q_{lam/mu}(a) * Q_mu(vars-1)
    double total = 0.0;
    // enumerate mu with lam_i >= mu_i >= lam_{i+1}
    int len = lam.length();
    std::vector<int> mu(len, 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == len) {
        budget();
        Partition m(std::vector<int>(mu.begin(), mu.end()));
        auto c = strip_coeffs(lam, m, t);
        total += c.phi * std::pow(a, double(lam.weight() - m.weight())) *
                 qval(m, vars - 1);
        return;
      }
      int lo = lam.part(i + 2);
      int hi = lam.part(i + 1);
      for (int v = hi; v >= lo; --v) {
        mu[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
    qmemo[key] = total;
    return total;
  };

  // lambda'_1(n) = l(lambda(n)) <= n along the ascending leg
  const long c2max = n2;
  const long c1max = n1;
  JointHeightLaw law;
  law.M = M;
  law.n1 = n1;
  law.n2 = n2;
  law.a = a;
  law.t = t;
  law.pmf.assign(c2max + 1, std::vector<double>(c1max + 1, 0.0));

  double a2 = a * a;
  double prefactor = std::pow((1.0 - a2) / (1.0 - t * a2), double(N) * double(M));

  // depth-first over ascending chains; lengths lambda'_1(n) = l(lambda(n))
  std::vector<Partition> strips;
  std::function<void(const Partition&, int, double, long, long)> rec =
      [&](const Partition& lam, int i, double wpsi, long len_n2, long len_n1) {
        if (i == N) {
          double q = qval(lam, M);
          if (q != 0.0) law.pmf[len_n2][len_n1] += prefactor * wpsi * q;
          return;
        }
        std::vector<Partition> nexts;
        strips_above(lam, part_cap, nexts);
        for (const auto& nx : nexts) {
          budget();
          auto c = strip_coeffs(nx, lam, t);
          double w = wpsi * c.psi * std::pow(a, double(nx.weight() - lam.weight()));
          if (w == 0.0) continue;
          long l2 = (i + 1 == n2) ? nx.length() : len_n2;
          long l1 = (i + 1 == n1) ? nx.length() : len_n1;
          rec(nx, i + 1, w, l2, l1);
        }
      };
  rec(Partition{}, 0, 1.0, 0, 0);

  double mass = law.mass();
  law.tail_bound = std::max(0.0, 1.0 - mass);
  return law;
}

JointHeightLaw truncated_joint_law_adaptive(double a, double t, int N, int M, int n1,
                                            int n2, int initial_cap,
                                            const TruncatedLawOptions& opt) {
  int cap = initial_cap;
  JointHeightLaw prev = truncated_joint_law(a, t, N, M, n1, n2, cap, opt);
  for (int iter = 0; iter < 12; ++iter) {
    cap *= 2;
    JointHeightLaw next = truncated_joint_law(a, t, N, M, n1, n2, cap, opt);
    if (tv_distance(prev, next) < 1e-10) return next;
    prev = std::move(next);
  }
  return prev;
}

}  // namespace hlsv
