#include "hlsv/partition.hpp"

#include <cmath>
#include <numeric>

#include "hlsv/common.hpp"

namespace hlsv {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw domain_error("Partition: parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw domain_error("Partition: parts must be weakly decreasing");
  }
}

std::int64_t Partition::weight() const {
  return std::accumulate(parts_.begin(), parts_.end(), std::int64_t{0});
}

int Partition::part(int i) const {
  if (i < 1 || i > length()) return 0;
  return parts_[i - 1];
}

int Partition::multiplicity(int j) const {
  int m = 0;
  for (int p : parts_)
    if (p == j) ++m;
  return m;
}

Partition Partition::conjugate() const {
  if (parts_.empty()) return Partition{};
  std::vector<int> conj(parts_[0], 0);
  for (int i = 1; i <= parts_[0]; ++i) {
    int c = 0;
    for (int p : parts_)
      if (p >= i) ++c;
    conj[i - 1] = c;
  }
  return Partition(std::move(conj));
}

namespace {

void enumerate_rec(int remaining, int max_part, std::vector<int>& stack,
                   std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(stack);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    stack.push_back(p);
    enumerate_rec(remaining - p, p, stack, out);
    stack.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int k) {
  if (k < 0) throw domain_error("partitions_of: k must be nonnegative");
  std::vector<Partition> out;
  std::vector<int> stack;
  enumerate_rec(k, k, stack, out);
  return out;
}

std::int64_t partition_count(int k) {
  if (k < 0) return 0;
  std::vector<std::int64_t> p(k + 1, 0);
  p[0] = 1;
  for (int n = 1; n <= k; ++n) {
    std::int64_t s = 0;
    for (int j = 1;; ++j) {
      std::int64_t g1 = std::int64_t(j) * (3 * j - 1) / 2;
      std::int64_t g2 = std::int64_t(j) * (3 * j + 1) / 2;
      if (g1 > n && g2 > n) break;
      std::int64_t sign = (j % 2 == 1) ? 1 : -1;
      if (g1 <= n) s += sign * p[n - g1];
      if (g2 <= n) s += sign * p[n - g2];
    }
    p[n] = s;
  }
  return p[k];
}

bool is_horizontal_strip(const Partition& lambda, const Partition& mu) {
  int n = std::max(lambda.length(), mu.length());
  for (int i = 1; i <= n; ++i) {
    if (lambda.part(i) < mu.part(i)) return false;          // containment
    if (mu.part(i) < lambda.part(i + 1)) return false;      // interlacing
  }
  return true;
}

StripCoeffs strip_coeffs(const Partition& lambda, const Partition& mu, double t) {
  if (!(t > 0.0 && t < 1.0)) throw domain_error("strip_coeffs: t must lie in (0,1)");
  StripCoeffs res;
  if (!is_horizontal_strip(lambda, mu)) return res;
  res.horizontal = true;
  res.psi = 1.0;
  res.phi = 1.0;

  // theta'_i, the strip's box count in column i, is 0 or 1 here
  auto theta_col = [&](int i) {
    int lc = 0, mc = 0;
    for (int p : lambda.parts())
      if (p >= i) ++lc;
    for (int p : mu.parts())
      if (p >= i) ++mc;
    return lc - mc;
  };

  int cols = lambda.length() == 0 ? 0 : lambda.parts()[0];
  for (int i = 1; i <= cols; ++i) {
    int ti = theta_col(i), tn = theta_col(i + 1);
    if (ti > tn) res.phi *= 1.0 - std::pow(t, lambda.multiplicity(i));
    if (ti < tn) res.psi *= 1.0 - std::pow(t, mu.multiplicity(i));
  }
  return res;
}

}  // namespace hlsv
