#pragma once
// Integer partitions: conjugation, enumeration in reverse-lexicographic order,
// interlacing (horizontal strips) and the skew Hall-Littlewood branching
// coefficients psi, phi.

#include <cstdint>
#include <vector>

namespace hlsv {

// A partition stored dense as its weakly decreasing positive parts.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int length() const { return static_cast<int>(parts_.size()); }
  std::int64_t weight() const;
  int part(int i) const;  // 1-based, 0 beyond the length
  // multiplicity of j in the partition
  int multiplicity(int j) const;
  Partition conjugate() const;

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }
  bool operator!=(const Partition& o) const { return parts_ != o.parts_; }

 private:
  std::vector<int> parts_;
};

// All partitions of k in reverse-lexicographic order, (k) first, (1^k) last.
// Size is p(k).
std::vector<Partition> partitions_of(int k);

// Independent partition counter p(k) via the pentagonal-number recurrence.
// Used as the enumeration oracle.
std::int64_t partition_count(int k);

// True iff mu is contained in lambda and lambda - mu is a horizontal strip,
// i.e. lambda_i >= mu_i >= lambda_{i+1} for all i.
bool is_horizontal_strip(const Partition& lambda, const Partition& mu);

struct StripCoeffs {
  bool horizontal = false;
  double psi = 0.0;
  double phi = 0.0;
};

// Branching coefficients of the one-variable skew Hall-Littlewood polynomials,
//   P_{lambda/mu}(x; t) = psi * x^{|lambda|-|mu|},
//   Q_{lambda/mu}(x; t) = phi * x^{|lambda|-|mu|},
// with phi = prod_{i in I} (1 - t^{m_i(lambda)}), psi = prod_{j in J}
// (1 - t^{m_j(mu)}); I collects columns where the strip has a box and the
// next column does not, J collects columns where it is the other way around.
// Both are 0 when the strip flag is false and 1 on empty index sets.
StripCoeffs strip_coeffs(const Partition& lambda, const Partition& mu, double t);

}  // namespace hlsv
