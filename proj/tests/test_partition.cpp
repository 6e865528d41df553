#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hlsv/partition.hpp"

using namespace hlsv;

TEST_CASE("conjugate") {
  CHECK(Partition({5, 3, 3, 2, 1}).conjugate() == Partition({5, 4, 3, 1, 1}));
  CHECK(Partition{}.conjugate() == Partition{});
  CHECK(Partition({4}).conjugate() == Partition({1, 1, 1, 1}));
  // involution and length/weight relations for all partitions of k <= 8
  for (int k = 0; k <= 8; ++k)
    for (const auto& lam : partitions_of(k)) {
      CHECK(lam.conjugate().conjugate() == lam);
      CHECK(lam.conjugate().weight() == k);
      if (k > 0) CHECK(lam.conjugate().length() == lam.parts()[0]);
    }
}

TEST_CASE("enumeration count and order") {
  CHECK(partitions_of(0).size() == 1);
  CHECK(partitions_of(4).size() == 5);
  CHECK(partitions_of(7).size() == 15);
  for (int k = 0; k <= 30; ++k)
    CHECK(static_cast<std::int64_t>(partitions_of(std::min(k, 20)).size()) ==
          partition_count(std::min(k, 20)));
  // reverse-lexicographic: (k) first, (1^k) last, strictly decreasing
  auto ps = partitions_of(6);
  CHECK(ps.front() == Partition({6}));
  CHECK(ps.back() == Partition({1, 1, 1, 1, 1, 1}));
  for (size_t i = 0; i + 1 < ps.size(); ++i) {
    const auto &a = ps[i].parts(), &b = ps[i + 1].parts();
    size_t j = 0;
    while (j < a.size() && j < b.size() && a[j] == b[j]) ++j;
    bool greater = j < a.size() && (j >= b.size() || a[j] > b[j]);
    CHECK(greater);
  }
}

TEST_CASE("horizontal strips and branching coefficients") {
  Partition lam({5, 3, 3, 2, 1}), mu({3, 3, 2, 1, 1});
  CHECK(is_horizontal_strip(lam, mu));
  CHECK(lam.weight() - mu.weight() == 4);

  double t = 0.37;
  auto same = strip_coeffs(lam, lam, t);
  CHECK(same.horizontal);
  CHECK(same.psi == doctest::Approx(1.0));
  CHECK(same.phi == doctest::Approx(1.0));

  auto one = strip_coeffs(Partition({1}), Partition{}, t);
  CHECK(one.horizontal);
  CHECK(one.phi == doctest::Approx(1.0 - t));
  CHECK(one.psi == doctest::Approx(1.0));

  // not a strip: two new boxes in one column
  CHECK_FALSE(is_horizontal_strip(Partition({2, 2}), Partition{}));

  // positivity whenever the strip flag is on
  for (int k = 0; k <= 6; ++k)
    for (const auto& l : partitions_of(k))
      for (int m = 0; m <= k; ++m)
        for (const auto& mm : partitions_of(m)) {
          auto c = strip_coeffs(l, mm, 0.42);
          if (c.horizontal) {
            CHECK(c.psi > 0.0);
            CHECK(c.phi > 0.0);
          } else {
            CHECK(c.psi == 0.0);
            CHECK(c.phi == 0.0);
          }
        }
}
