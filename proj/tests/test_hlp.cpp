#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hlsv/hlp.hpp"

using namespace hlsv;

TEST_CASE("chain weights, N = M = 1") {
  double a = 0.3, t = 0.25;
  double pref = (1 - a * a) / (1 - t * a * a);

  HLChain empty{{Partition{}, Partition{}}, {Partition{}, Partition{}}};
  CHECK(chain_weight(empty, a, t) == doctest::Approx(pref).epsilon(1e-14));

  HLChain one{{Partition{}, Partition({1})}, {Partition{}, Partition({1})}};
  CHECK(chain_weight(one, a, t) ==
        doctest::Approx(pref * a * (1 - t) * a).epsilon(1e-14));

  // geometric sum over lambda(1) = (k) reproduces the Cauchy identity
  double total = 0.0;
  for (int k = 0; k <= 200; ++k) {
    HLChain c{{Partition{}, k ? Partition({k}) : Partition{}},
              {Partition{}, k ? Partition({k}) : Partition{}}};
    total += chain_weight(c, a, t);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  HLChain bad{{Partition{}, Partition({2, 2})}, {Partition{}, Partition({2, 2})}};
  CHECK_THROWS_AS(chain_weight(bad, a, t), domain_error);
}

TEST_CASE("truncated law: mass exhaustion and tail bound") {
  double a = 0.3, t = 0.3;
  double prev_tail = 1.0;
  for (int cap : {5, 10, 20, 40}) {
    auto law = truncated_joint_law(a, t, 1, 1, 1, 1, cap);
    CHECK(law.mass() <= 1.0 + 1e-12);
    CHECK(law.mass() + law.tail_bound >= 1.0 - 1e-12);
    CHECK(law.tail_bound <= prev_tail + 1e-15);
    prev_tail = law.tail_bound;
  }
  CHECK(prev_tail < 1e-8);
}

TEST_CASE("N=M=1 law matches six-vertex b2") {
  double a = 0.3, t = 0.3;
  auto p = ModelParams::from_at(a, t);
  auto law = truncated_joint_law(a, t, 1, 1, 1, 1, 60);
  CHECK(std::abs(law.pmf[0][0] - p.b2) < 1e-10);
}

TEST_CASE("BBW equality against the transfer matrix") {
  double a = 0.2, t = 0.2;
  auto p = ModelParams::from_at(a, t);
  for (int N : {1, 2})
    for (int M : {1, 2}) {
      int n1 = N, n2 = std::max(1, N - 1);
      auto hl = truncated_joint_law_adaptive(a, t, N, M, n1, n2, 20);
      auto sv = exact_joint_height_law(p, M, n1, n2);
      CHECK(tv_distance(hl, sv) < std::max(1e-8, hl.tail_bound));
    }
}

TEST_CASE("length bound l(lambda(n)) <= n") {
  auto law = truncated_joint_law(0.25, 0.3, 2, 2, 2, 1, 25);
  for (size_t c2 = 0; c2 < law.pmf.size(); ++c2)
    for (size_t c1 = 0; c1 < law.pmf[c2].size(); ++c1)
      if (c2 > 1 || c1 > 2) CHECK(law.pmf[c2][c1] == 0.0);
}

TEST_CASE("enumeration budget error") {
  TruncatedLawOptions opt;
  opt.chain_budget = 10;
  CHECK_THROWS_AS(truncated_joint_law(0.3, 0.3, 2, 2, 2, 1, 30, opt), budget_error);
}
