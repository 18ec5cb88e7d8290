#pragma once

#include <optional>
#include <vector>

#include "chainline/chain.hpp"

namespace chainline {

// A proposed chain of finite modifications: C_x = (A_x ∪ added) \ removed
// with every touched node at a level below the budget.
struct LiftingCandidate {
  int budget = 0;
  std::vector<NodeDelta> modifications;  // aligned with the family generators
};

struct ChainViolationTriple {
  std::size_t x_index = 0;
  std::size_t y_index = 0;
  TreeNode node;  // in C_x \ C_y
};

// nullopt = the modified sets nest (PASS); otherwise the minimal violating
// triple by (level, lex) of the node. Throws std::invalid_argument when the
// candidate breaks its budget invariant.
std::optional<ChainViolationTriple> is_chain(const LiftingCandidate& candidate,
                                             const ChainFamily& family);

enum class LiftingVerdict { Sat, Unsat, Unknown };

struct LiftingOutcome {
  LiftingVerdict verdict = LiftingVerdict::Unknown;
  std::optional<LiftingCandidate> candidate;     // Sat: a verified candidate
  std::optional<ChainViolationTriple> blocking;  // Unsat: untouchable violation
};

// Exact decision: the chain constraints decompose per node, so the family is
// liftable within the budget iff no violation sits at a level in
// [budget, depth]. On SAT the returned candidate takes C_x(sigma) =
// max over y <= x of membership at the free levels (the union repair), which
// is monotone by construction and touches only levels below the budget.
LiftingOutcome search_lifting(const ChainFamily& family, int budget);

// Certificate refuting every candidate of the given budget on {x, y}:
// the pair diverges at m > budget with x(m) = 0, y(m) = 1, and
// sigma = x|(m+1) lies in A_x \ A_y beyond any modification's reach.
struct Falsification {
  std::size_t x_index = 0;
  std::size_t y_index = 0;
  TreeNode sigma;
  std::size_t m = 0;
  int budget = 0;
};

// Scans generator pairs for the certificate pattern; picks the pair with the
// deepest qualifying divergence. Dyadic kind only. Never a false positive.
std::optional<Falsification> falsify(const ChainFamily& family, int budget);

bool falsification_valid(const Falsification& certificate, const ChainFamily& family);

}  // namespace chainline
