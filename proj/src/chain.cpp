#include "chainline/chain.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace chainline {

bool s_symbol_qualifies(TreeKind kind, Symbol s) {
  return kind == TreeKind::Dyadic ? s == 1 : (s % 2) == 1;
}

bool in_s_set(const TreeNode& node, const Branch& x) {
  if (node.kind() != x.kind()) throw KindMismatchError("in_s_set: mixed tree kinds");
  const std::size_t n = node.length();
  if (n == 0 || node.back() != 0) return false;
  if (!s_symbol_qualifies(x.kind(), x.at(n - 1))) return false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (node.at(i) != x.at(i)) return false;
  }
  return true;
}

std::vector<TreeNode> s_set(const Branch& x, int depth) {
  std::vector<TreeNode> nodes;
  for (int n = 0; n < depth; ++n) {
    if (!s_symbol_qualifies(x.kind(), x.at(static_cast<std::size_t>(n)))) continue;
    nodes.push_back(x.prefix_node(static_cast<std::size_t>(n)).child(0));
  }
  return nodes;
}

bool a_membership(const TreeNode& node, const Branch& x) {
  if (node.kind() != x.kind()) throw KindMismatchError("a_membership: mixed tree kinds");
  const std::size_t n = node.length();
  for (std::size_t i = 0; i < n; ++i) {
    const Symbol ns = node.at(i);
    const Symbol bs = x.at(i);
    if (ns == bs) continue;
    if (ns > bs) return false;  // node beyond x
    // First difference with the node below x. The only way it can still fall
    // outside A_x is membership in S_x, which pins the difference to the last
    // position with symbols (0, qualifying).
    return !(i + 1 == n && ns == 0 && s_symbol_qualifies(x.kind(), bs));
  }
  return true;  // initial segments are never in S_x: that would need x(n-1)
                // both 0 (= node's last symbol) and qualifying
}

bool NodeDelta::contains_added(const TreeNode& node) const {
  return std::find(added.begin(), added.end(), node) != added.end();
}

bool NodeDelta::contains_removed(const TreeNode& node) const {
  return std::find(removed.begin(), removed.end(), node) != removed.end();
}

ChainFamily::ChainFamily(TreeKind kind, std::vector<Branch> generators, int depth)
    : kind_(kind), generators_(std::move(generators)), depth_(depth) {
  if (depth_ < 0) throw std::invalid_argument("ChainFamily: negative depth");
  for (const Branch& g : generators_) {
    if (g.kind() != kind_) throw KindMismatchError("ChainFamily: generator of wrong kind");
  }
  std::sort(generators_.begin(), generators_.end(), [](const Branch& a, const Branch& b) {
    return lex_compare(a, b) == std::strong_ordering::less;
  });
  generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
}

const NodeDelta* ChainFamily::override_for(std::size_t i) const {
  if (overrides_.empty() || overrides_[i].empty()) return nullptr;
  return &overrides_[i];
}

void ChainFamily::set_override(std::size_t i, NodeDelta delta) {
  if (overrides_.empty()) overrides_.resize(generators_.size());
  overrides_[i] = std::move(delta);
}

bool ChainFamily::member(const TreeNode& node, std::size_t i) const {
  if (!overrides_.empty()) {
    const NodeDelta& delta = overrides_[i];
    if (delta.contains_removed(node)) return false;
    if (delta.contains_added(node)) return true;
  }
  return a_membership(node, generators_[i]);
}

std::size_t ChainFamily::pair_divergence(std::size_t i, std::size_t j) const {
  return divergence_index(generators_[i], generators_[j]);
}

std::size_t MembershipVector::descents() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < bits.size(); ++i) {
    if (bits[i] == 1 && bits[i + 1] == 0) ++count;
  }
  return count;
}

bool MembershipVector::monotone() const {
  for (std::size_t i = 0; i + 1 < bits.size(); ++i) {
    if (bits[i] == 1 && bits[i + 1] == 0) return false;
  }
  return true;
}

MembershipVector membership_vector(const TreeNode& node, const ChainFamily& family) {
  MembershipVector vec;
  vec.bits.resize(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    vec.bits[i] = family.member(node, i) ? 1 : 0;
  }
  return vec;
}

namespace {

// Without overrides, A_x \ A_y for x < y diverging at m is at most the single
// node x|m^0 at level m+1 (present iff y(m) qualifies and x(m) does not);
// overrides can only move nodes they explicitly touch.
std::vector<TreeNode> violation_candidates(const ChainFamily& family, std::size_t i,
                                           std::size_t j, std::size_t divergence) {
  std::vector<TreeNode> candidates;
  const Branch& x = family.generator(i);
  const Branch& y = family.generator(j);
  if (divergence + 1 <= static_cast<std::size_t>(family.depth()) &&
      s_symbol_qualifies(family.kind(), y.at(divergence)) &&
      !s_symbol_qualifies(family.kind(), x.at(divergence))) {
    candidates.push_back(x.prefix_node(divergence).child(0));
  }
  if (const NodeDelta* dx = family.override_for(i)) {
    candidates.insert(candidates.end(), dx->added.begin(), dx->added.end());
  }
  if (const NodeDelta* dy = family.override_for(j)) {
    candidates.insert(candidates.end(), dy->removed.begin(), dy->removed.end());
  }
  return candidates;
}

bool node_order(const TreeNode& a, const TreeNode& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  return lex_compare(a, b) == std::strong_ordering::less;
}

}  // namespace

AlmostChainReport verify_almost_chain(const ChainFamily& family) {
  AlmostChainReport report;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const std::size_t divergence = family.pair_divergence(i, j);
      PairViolations pair{i, j, divergence, {}, true};
      for (const TreeNode& candidate : violation_candidates(family, i, j, divergence)) {
        if (candidate.length() > static_cast<std::size_t>(family.depth())) continue;
        if (!family.member(candidate, i) || family.member(candidate, j)) continue;
        if (std::find(pair.nodes.begin(), pair.nodes.end(), candidate) != pair.nodes.end()) {
          continue;
        }
        pair.nodes.push_back(candidate);
        if (candidate.length() > divergence + 1) pair.confined = false;
      }
      if (pair.nodes.empty()) continue;
      std::sort(pair.nodes.begin(), pair.nodes.end(), node_order);
      if (!pair.confined) report.pass = false;
      report.pairs.push_back(std::move(pair));
    }
  }
  return report;
}

std::vector<AtomGroup> atoms(const ChainFamily& family, int min_level, std::size_t budget) {
  std::vector<AtomGroup> groups;
  std::map<std::vector<std::uint8_t>, std::size_t> index;
  for_each_node(
      family.kind(), min_level, family.depth(),
      [&](const TreeNode& node) {
        MembershipVector vec = membership_vector(node, family);
        auto [it, inserted] = index.try_emplace(vec.bits, groups.size());
        if (inserted) groups.push_back(AtomGroup{std::move(vec), {}});
        groups[it->second].nodes.push_back(node);
      },
      budget);
  return groups;
}

}  // namespace chainline
