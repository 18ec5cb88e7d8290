#pragma once

#include <optional>
#include <vector>

#include "chainline/chain.hpp"

namespace chainline {

// Tube constraints for the norm minimization: running sums must stay within
// eps of each target in turn, starting from 0.
struct Tube {
  std::vector<double> targets;
  double eps = 0.0;

  // Targets are the membership bits followed by the terminal total-mass
  // target 1.
  static Tube from_membership(const MembershipVector& vec, double eps);
};

// Minimal sum of |increments| whose running sums meet the tube: the greedy
// taut-string sweep (track the reachable interval, pay only when it must
// move). Always feasible.
double min_norm_taut_string(const Tube& tube);

// Independent oracle: dynamic program over the breakpoint grid of the
// equivalent shortest-path problem. Restricted to tubes with at most 14
// targets; test use only.
double min_norm_lp_oracle(const Tube& tube);

// Max over candidate nodes sigma with horizon <= |sigma| <= max_level of the
// tube minimum for membership_vector(sigma). Candidates are the generators'
// own prefixes and their 0-children; every membership vector with a descent
// is realized by such a node, so the max over candidates equals the max over
// all nodes in range. Certified lower bound for any extension witness family
// that is eps-close on generators beyond the horizon.
double eta_lower_estimate(const ChainFamily& family, int horizon, double eps,
                          int max_level = -1);

struct EtaDetail {
  double value = 0.0;
  TreeNode argmax;
  std::size_t candidates = 0;
};

EtaDetail eta_lower_detail(const ChainFamily& family, int horizon, double eps,
                           int max_level = -1);

// Child indices i <= |base| such that some generator x has x|(n+1) = base^i.
std::vector<int> child_hit_set(const ChainFamily& family, const TreeNode& base);

// Fraction of the level-(n+1) extensions of y|n whose cylinder contains a
// generator, each child weighted 1/(n+1). Factorial kind only.
double density_profile(const ChainFamily& family, const Branch& y, int level);

struct IntervalStat {
  int begin = 0;   // J_i = [begin, begin + 2k)
  int hits = 0;    // |I ∩ J_i|
  bool has_even = false;
  bool has_odd = false;
};

struct CountingReport {
  bool pass = false;
  bool claim1 = false;  // |I| >= (2p / (2p+1)) (n+1)
  bool claim2 = false;  // |I ∩ J_i| > k for every i < p
  std::vector<IntervalStat> intervals;
};

// Checks the two counting inequalities for a concrete hit set I; requires
// n + 1 = 2pk. PASS implies each interval holds an even and an odd hit.
CountingReport verify_counting_claims(const std::vector<int>& hit_set, int p, int k, int n);

struct AlternatingWitness {
  TreeNode sigma;
  std::vector<std::size_t> generator_indices;  // x_0 < x_1 < ... < x_{p-1}
  int p = 0;
};

struct WitnessSearchResult {
  std::optional<AlternatingWitness> witness;
  double best_density = 0.0;  // best profile seen, for not-found reports
};

// Searches generator prefixes y|n with n + 1 = 2pk for a base whose children
// pass the counting claims, extracts parity-alternating child indices, and
// returns sigma = y|n^0 with generators realizing membership 1,0,1,...
// Every returned witness is verified through a_membership; never a false
// positive. Factorial kind, p >= 1.
WitnessSearchResult find_alternating_witness(const ChainFamily& family, int p);

}  // namespace chainline
