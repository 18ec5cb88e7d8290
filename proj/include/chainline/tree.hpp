#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainline/rng.hpp"

namespace chainline {

// The two tree universes: Dyadic nodes take symbols in {0,1}; Factorial nodes
// satisfy sigma(i) <= i, so the branching widens with the level.
enum class TreeKind { Dyadic, Factorial };

std::string to_string(TreeKind kind);
TreeKind tree_kind_from_string(const std::string& name);

using Symbol = int;

inline Symbol max_symbol_at(TreeKind kind, std::size_t index) {
  return kind == TreeKind::Dyadic ? 1 : static_cast<Symbol>(index);
}

struct KindMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite sequence in one of the two universes; the empty sequence is the
// root. Immutable value type.
class TreeNode {
 public:
  TreeNode() : kind_(TreeKind::Dyadic) {}
  TreeNode(TreeKind kind, std::vector<Symbol> symbols);
  static TreeNode root(TreeKind kind) { return TreeNode(kind, {}); }

  TreeKind kind() const { return kind_; }
  std::size_t length() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol at(std::size_t i) const { return symbols_[i]; }
  Symbol back() const { return symbols_.back(); }
  std::span<const Symbol> symbols() const { return symbols_; }

  TreeNode prefix(std::size_t length) const;
  TreeNode child(Symbol next) const;

  bool operator==(const TreeNode& other) const = default;

 private:
  TreeKind kind_;
  std::vector<Symbol> symbols_;
};

// An infinite branch: finite prefix followed by a periodic tail word. The
// representation is canonicalized (tail folded to its shortest period, then
// any periodic overhang of the prefix absorbed into the tail) so structural
// equality coincides with equality of the underlying symbol sequences.
class Branch {
 public:
  Branch(TreeKind kind, std::vector<Symbol> prefix, std::vector<Symbol> tail_word);

  TreeKind kind() const { return kind_; }
  const std::vector<Symbol>& prefix() const { return prefix_; }
  const std::vector<Symbol>& tail_word() const { return tail_; }

  Symbol at(std::size_t i) const {
    return i < prefix_.size() ? prefix_[i] : tail_[(i - prefix_.size()) % tail_.size()];
  }

  TreeNode prefix_node(std::size_t length) const;
  bool tail_contains(Symbol s) const;

  // Positions >= bound are determined by the shared periodic structure; two
  // branches that agree below it are equal.
  std::size_t comparison_bound(const Branch& other) const;

  bool operator==(const Branch& other) const = default;

 private:
  void canonicalize();
  void validate() const;

  TreeKind kind_;
  std::vector<Symbol> prefix_;
  std::vector<Symbol> tail_;
};

inline constexpr std::size_t kNoDifference = std::numeric_limits<std::size_t>::max();

// First index where the node and the branch disagree; kNoDifference when the
// node is an initial segment of the branch.
std::size_t first_difference(const TreeNode& node, const Branch& branch);

// First index where two distinct branches disagree.
std::size_t divergence_index(const Branch& a, const Branch& b);

// Lexicographic order on nodes and branches of one universe: an initial
// segment precedes every proper extension, otherwise the first differing
// symbol decides. Mixed kinds throw KindMismatchError.
std::strong_ordering lex_compare(const TreeNode& a, const TreeNode& b);
std::strong_ordering lex_compare(const TreeNode& a, const Branch& b);
std::strong_ordering lex_compare(const Branch& a, const TreeNode& b);
std::strong_ordering lex_compare(const Branch& a, const Branch& b);

inline constexpr std::size_t kDefaultNodeBudget = std::size_t{1} << 22;

// Number of nodes at the given level, saturating at the maximum value.
unsigned long long level_count(TreeKind kind, int level);

// All nodes of the given length in lexicographic order, without repetition.
std::vector<TreeNode> enumerate_level(TreeKind kind, int level,
                                      std::size_t budget = kDefaultNodeBudget);

// Streams every node with min_level <= length <= max_level, level by level in
// lexicographic order, without materializing the set.
void for_each_node(TreeKind kind, int min_level, int max_level,
                   const std::function<void(const TreeNode&)>& fn,
                   std::size_t budget = kDefaultNodeBudget);

// Tail policy for branch sampling: the prefix is drawn uniformly per
// position, the periodic tail word is fixed by the caller.
struct TailPolicy {
  std::size_t prefix_length = 0;
  std::vector<Symbol> tail_word;
};

// Deterministic under a fixed rng state. Dyadic tail words must contain both
// symbols (generators need both values infinitely often); factorial tail
// words must be valid at every position they will occupy.
Branch sample_branch(TreeKind kind, Rng& rng, const TailPolicy& policy);

std::size_t hash_value(const TreeNode& node);

}  // namespace chainline

template <>
struct std::hash<chainline::TreeNode> {
  std::size_t operator()(const chainline::TreeNode& node) const {
    return chainline::hash_value(node);
  }
};
