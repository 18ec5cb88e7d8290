#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chainline/tree.hpp"

namespace chainline {

// The exceptional set S_x: nodes x|n^0 where x(n) = 1 (dyadic) resp. x(n) odd
// (factorial). A_x is the lexicographic lower half {t : t <= x} minus S_x;
// the two constructions differ only in the symbol predicate.
bool s_symbol_qualifies(TreeKind kind, Symbol s);
bool in_s_set(const TreeNode& node, const Branch& x);
std::vector<TreeNode> s_set(const Branch& x, int depth);

// 1 iff node ∈ A_x.
bool a_membership(const TreeNode& node, const Branch& x);

// Finite symmetric-difference patch applied to one generator's set; used for
// corruption in tests and for lifting candidates.
struct NodeDelta {
  std::vector<TreeNode> added;
  std::vector<TreeNode> removed;
  bool empty() const { return added.empty() && removed.empty(); }
  bool contains_added(const TreeNode& node) const;
  bool contains_removed(const TreeNode& node) const;
};

// An ordered family {A_x : x in generators} truncated at `depth`. Generators
// are sorted strictly increasing and deduplicated on construction. Optional
// per-generator overrides patch the sets for experiments with corrupted
// families.
class ChainFamily {
 public:
  ChainFamily(TreeKind kind, std::vector<Branch> generators, int depth);

  TreeKind kind() const { return kind_; }
  int depth() const { return depth_; }
  std::size_t size() const { return generators_.size(); }
  const Branch& generator(std::size_t i) const { return generators_[i]; }
  const std::vector<Branch>& generators() const { return generators_; }

  bool has_overrides() const { return !overrides_.empty(); }
  const NodeDelta* override_for(std::size_t i) const;
  void set_override(std::size_t i, NodeDelta delta);

  // Membership in the family's (possibly patched) set of generator i.
  bool member(const TreeNode& node, std::size_t i) const;

  std::size_t pair_divergence(std::size_t i, std::size_t j) const;

 private:
  TreeKind kind_;
  std::vector<Branch> generators_;
  int depth_;
  std::vector<NodeDelta> overrides_;  // empty, or aligned with generators_
};

struct MembershipVector {
  std::vector<std::uint8_t> bits;
  bool operator==(const MembershipVector&) const = default;
  std::size_t descents() const;  // number of 1 -> 0 transitions
  bool monotone() const;         // nondecreasing
};

MembershipVector membership_vector(const TreeNode& node, const ChainFamily& family);

struct PairViolations {
  std::size_t x_index = 0;
  std::size_t y_index = 0;
  std::size_t divergence = 0;
  std::vector<TreeNode> nodes;  // members of A_x \ A_y at levels <= depth
  bool confined = true;         // all violations at levels <= divergence + 1
};

struct AlmostChainReport {
  bool pass = true;
  std::vector<PairViolations> pairs;  // only pairs with nonempty violation sets
};

// Certifies the almost-chain property structurally: for every pair x < y the
// violation set must sit at levels <= divergence(x, y) + 1.
AlmostChainReport verify_almost_chain(const ChainFamily& family);

struct AtomGroup {
  MembershipVector vector;
  std::vector<TreeNode> nodes;
};

// Partition of the nodes with min_level <= length <= depth by membership
// vector, in order of first appearance (level by level, lexicographic).
// Once min_level exceeds every pairwise divergence plus one, the groups are
// the at-most-(generators + 1) monotone patterns and are lex-convex.
std::vector<AtomGroup> atoms(const ChainFamily& family, int min_level = 0,
                             std::size_t budget = kDefaultNodeBudget);

}  // namespace chainline
