#pragma once
// Shared basics: complex alias, error categories, log-space representation of
// the t-Laplace argument u, and a small thread helper.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hlsv {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846;

// Validation failures (bad inputs, domain violations). CLI maps these to exit 1.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Budget / convergence failures. CLI maps these to exit 2.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// A complex number u with u not in [0, inf), stored through log(-u).
// In the KPZ scaling regime |log(-u)| grows like M, far beyond the range of a
// raw double, so u is never materialized; powers [-u]^s are taken as
// exp(s * log(-u)). phase = arg(-u) lies in (-pi, pi).
struct LogNeg {
  bool is_zero = false;
  double log_mag = 0.0;  // log |u|
  double phase = 0.0;    // arg(-u), in (-pi, pi)

  static LogNeg zero() { return LogNeg{true, 0.0, 0.0}; }

  static LogNeg from_log(double log_mag, double phase = 0.0) {
    if (phase <= -PI || phase >= PI)
      throw domain_error("BadU: phase of -u must lie in (-pi, pi), u on [0,inf) not allowed");
    return LogNeg{false, log_mag, phase};
  }

  static LogNeg from_complex(cplx u) {
    if (u == cplx(0.0, 0.0)) return zero();
    cplx mu = -u;
    double ph = std::arg(mu);
    if (!(std::abs(ph) < PI)) throw domain_error("BadU: u lies on [0, infinity)");
    return LogNeg{false, std::log(std::abs(mu)), ph};
  }

  // log(-u) as a complex number
  cplx log_neg() const { return cplx(log_mag, phase); }

  // [-u]^s computed as exp(s log(-u)); 0 for u = 0 (Re s > 0 in all uses).
  cplx pow_neg(cplx s) const {
    if (is_zero) return cplx(0.0, 0.0);
    return std::exp(s * log_neg());
  }

  // the actual value of u, usable only when |log_mag| is moderate
  cplx value() const {
    if (is_zero) return cplx(0.0, 0.0);
    return -std::exp(cplx(log_mag, phase));
  }
};

// Truncation control for infinite products / bilateral sums.
struct QTol {
  double abs_tol = 1e-14;
  int max_terms = 4000;
};

// Deterministic splitmix64; used to key per-sample RNG streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Small counter-free PRNG with per-stream seeding: xoshiro256** seeded from
// splitmix64(seed, stream). Reproducible independently of thread scheduling.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0xa0761d6478bd642fULL * (stream + 1));
    for (auto& si : s_) si = x = splitmix64(x);
  }
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }
  // uniform in [0,1)
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return next_double() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Global worker cap for parallel loops (set by the CLI --threads flag).
int hardware_threads();
void set_max_threads(int n);

// Runs fn(i) for i in [0, n) over a fixed chunk decomposition. Chunk
// boundaries do not depend on the thread count, so reductions that combine
// per-chunk partials in index order stay deterministic.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& chunk_fn);

}  // namespace hlsv
