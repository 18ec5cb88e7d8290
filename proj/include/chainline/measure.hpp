#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "chainline/chain.hpp"
#include "chainline/rational.hpp"

namespace chainline {

// A point of the compact line, i.e. a cut of the generator order. A node
// anchor sigma stands for the ultrafilter with A_x in p(sigma) iff sigma < x;
// branch anchors behave the same with the branch in place of sigma. Bottom
// and Top are the least and greatest elements.
class CutPoint {
 public:
  static CutPoint bottom() { return CutPoint(Bottom{}); }
  static CutPoint top() { return CutPoint(Top{}); }
  explicit CutPoint(TreeNode node) : anchor_(std::move(node)) {}
  explicit CutPoint(Branch branch) : anchor_(std::move(branch)) {}

  bool is_bottom() const { return std::holds_alternative<Bottom>(anchor_); }
  bool is_top() const { return std::holds_alternative<Top>(anchor_); }
  bool is_node() const { return std::holds_alternative<TreeNode>(anchor_); }
  bool is_branch() const { return std::holds_alternative<Branch>(anchor_); }
  const TreeNode& node() const { return std::get<TreeNode>(anchor_); }
  const Branch& branch() const { return std::get<Branch>(anchor_); }

  bool operator==(const CutPoint& other) const = default;

 private:
  struct Bottom {
    bool operator==(const Bottom&) const = default;
  };
  struct Top {
    bool operator==(const Top&) const = default;
  };

  explicit CutPoint(Bottom b) : anchor_(b) {}
  explicit CutPoint(Top t) : anchor_(t) {}

  std::variant<Bottom, TreeNode, Branch, Top> anchor_;
};

std::strong_ordering cut_compare(const CutPoint& a, const CutPoint& b);

// Strict comparison against a branch: Bottom always counts as below, Top
// never, anchors by lex order (a branch anchor equal to x is not below x).
bool cut_below_branch(const CutPoint& cut, const Branch& x);

// Finitely supported signed measure on cut points. Canonical form: atoms
// sorted by cut, equal cuts merged, zero weights dropped; total variation is
// then the variation of the induced measure, not of the representation.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  explicit SignedMeasure(std::vector<std::pair<CutPoint, Rational>> atoms);
  static SignedMeasure dirac(CutPoint cut, Rational weight = Rational(1));

  const std::vector<std::pair<CutPoint, Rational>>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }

  // mu(A_x): sum of weights at cuts strictly below x. Bilinear in weights.
  Rational evaluate(const Branch& x) const;

  Rational total_mass() const;
  Rational total_variation() const;

  // (positive mass, absolute negative mass) at cuts <= x, both inclusive.
  std::pair<Rational, Rational> cumulative(const CutPoint& x) const;

  SignedMeasure scaled(const Rational& factor) const;
  SignedMeasure plus(const SignedMeasure& other) const;

  // Weights as machine integers when all of them are integral; the exact
  // verification loops use this fast path.
  std::optional<std::vector<long long>> integer_weights() const;

  bool operator==(const SignedMeasure& other) const = default;

 private:
  std::vector<std::pair<CutPoint, Rational>> atoms_;
};

// The explicit extension witness for a dyadic node sigma of length n:
//   sigma(n-1) = 1                    ->  d(sigma)
//   sigma(n-1) = 0, rest all ones     ->  d(sigma) - d(sigma') + d(top)
//   otherwise                         ->  d(sigma) - d(sigma') + d(sigma'')
// with sigma' = sigma|(n-1)^1 and sigma'' = sigma|m^1 for the greatest m with
// sigma(m) = 0, m < n-1. The root gets the single-atom form. The top atom of
// the middle case vanishes on every generator and keeps the total mass at 1.
SignedMeasure witness_measure(const TreeNode& sigma);

struct WitnessCounterexample {
  TreeNode sigma;
  std::size_t generator_index = 0;
  long long value = 0;
  int expected = 0;
};

struct WitnessReport {
  bool pass = true;
  std::optional<WitnessCounterexample> counterexample;
};

// Exact check that witness_measure(sigma) evaluates to a_membership(sigma, x)
// on every generator. Integer arithmetic, no tolerance.
WitnessReport verify_witness_claim(const TreeNode& sigma, const ChainFamily& family);

struct WitnessFamilyReport {
  bool pass = true;
  unsigned long long checked_pairs = 0;
  Rational max_total_variation;
  std::optional<WitnessCounterexample> counterexample;
};

// Runs verify_witness_claim for every node up to max_level (default: family
// depth), streaming nodes to keep memory flat.
WitnessFamilyReport verify_witness_family(const ChainFamily& family, int max_level = -1);

// The comparison target of the closeness checks; equals a_membership.
bool delta_point(const TreeNode& sigma, const Branch& x);

}  // namespace chainline
