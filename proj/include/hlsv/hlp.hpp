#pragma once
// Ascending Hall-Littlewood process oracle: chain weights and a truncated
// exact enumeration of the joint law of (lambda'_1(n2), lambda'_1(n1)) in the
// homogeneous case x_i = y_j = a. Used to verify the distributional equality
// with six-vertex heights numerically.

#include <vector>

#include "hlsv/partition.hpp"
#include "hlsv/sixvertex.hpp"

namespace hlsv {

// One summand of the process: the ascending leg empty = lambda(0) <= ... <=
// lambda(N) carries P-branching (psi) weights, the descending leg
// empty = nu(0) <= nu(1) <= ... <= nu(M) = lambda(N) expands Q_{lambda(N)}
// with phi weights. Interlacing must hold at every step.
struct HLChain {
  std::vector<Partition> ascending;   // size N+1, starts at the empty partition
  std::vector<Partition> descending;  // size M+1, ends at lambda(N)
};

// prod_{NM} (1-a^2)/(1-t a^2) * prod psi_i a^{d|lambda|} * prod phi_i a^{d|nu|}.
// Throws InvalidChain when a step is not a horizontal strip.
double chain_weight(const HLChain& chain, double a, double t);

struct TruncatedLawOptions {
  long chain_budget = 200000000;  // enumerated branching steps before Budget
};

// Joint pmf of (lambda'_1(n2), lambda'_1(n1)) over all chains with parts
// <= part_cap; tail_bound = 1 - (total truncated mass) bounds the
// total-variation truncation error. The law's schema matches the six-vertex
// engine so the two can be compared directly.
JointHeightLaw truncated_joint_law(double a, double t, int N, int M, int n1, int n2,
                                   int part_cap, const TruncatedLawOptions& opt = {});

// Doubles part_cap until the pmf stops changing by more than 1e-10 in TV.
JointHeightLaw truncated_joint_law_adaptive(double a, double t, int N, int M, int n1,
                                            int n2, int initial_cap = 10,
                                            const TruncatedLawOptions& opt = {});

}  // namespace hlsv
