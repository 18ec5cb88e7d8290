#include "chainline/lifting.hpp"

#include <algorithm>

namespace chainline {

namespace {

bool node_before(const TreeNode& a, const TreeNode& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  return lex_compare(a, b) == std::strong_ordering::less;
}

void validate_candidate(const LiftingCandidate& candidate, const ChainFamily& family) {
  if (candidate.budget < 0) throw std::invalid_argument("malformed candidate: budget < 0");
  if (!candidate.modifications.empty() &&
      candidate.modifications.size() != family.size()) {
    throw std::invalid_argument("malformed candidate: modification list misaligned");
  }
  for (const NodeDelta& delta : candidate.modifications) {
    for (const TreeNode& node : delta.added) {
      if (node.length() >= static_cast<std::size_t>(candidate.budget)) {
        throw std::invalid_argument("malformed candidate: modification at level >= budget");
      }
    }
    for (const TreeNode& node : delta.removed) {
      if (node.length() >= static_cast<std::size_t>(candidate.budget)) {
        throw std::invalid_argument("malformed candidate: modification at level >= budget");
      }
    }
  }
}

bool effective_member(const LiftingCandidate& candidate, const ChainFamily& family,
                      const TreeNode& node, std::size_t i) {
  if (!candidate.modifications.empty()) {
    const NodeDelta& delta = candidate.modifications[i];
    if (delta.contains_removed(node)) return false;
    if (delta.contains_added(node)) return true;
  }
  return family.member(node, i);
}

// Nodes at which C_x \ C_y could be nonempty: the bare-family candidates plus
// everything the lifting candidate touches on the relevant sides.
std::vector<TreeNode> pair_candidates(const LiftingCandidate& candidate,
                                      const ChainFamily& family, std::size_t i,
                                      std::size_t j) {
  std::vector<TreeNode> nodes;
  const std::size_t divergence = family.pair_divergence(i, j);
  const Branch& x = family.generator(i);
  const Branch& y = family.generator(j);
  if (divergence + 1 <= static_cast<std::size_t>(family.depth()) &&
      s_symbol_qualifies(family.kind(), y.at(divergence)) &&
      !s_symbol_qualifies(family.kind(), x.at(divergence))) {
    nodes.push_back(x.prefix_node(divergence).child(0));
  }
  if (const NodeDelta* dx = family.override_for(i)) {
    nodes.insert(nodes.end(), dx->added.begin(), dx->added.end());
  }
  if (const NodeDelta* dy = family.override_for(j)) {
    nodes.insert(nodes.end(), dy->removed.begin(), dy->removed.end());
  }
  if (!candidate.modifications.empty()) {
    const NodeDelta& dx = candidate.modifications[i];
    const NodeDelta& dy = candidate.modifications[j];
    nodes.insert(nodes.end(), dx.added.begin(), dx.added.end());
    nodes.insert(nodes.end(), dy.removed.begin(), dy.removed.end());
  }
  return nodes;
}

}  // namespace

std::optional<ChainViolationTriple> is_chain(const LiftingCandidate& candidate,
                                             const ChainFamily& family) {
  validate_candidate(candidate, family);
  std::optional<ChainViolationTriple> best;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      for (const TreeNode& node : pair_candidates(candidate, family, i, j)) {
        if (node.length() > static_cast<std::size_t>(family.depth())) continue;
        if (!effective_member(candidate, family, node, i)) continue;
        if (effective_member(candidate, family, node, j)) continue;
        if (!best || node_before(node, best->node)) {
          best = ChainViolationTriple{i, j, node};
        }
      }
    }
  }
  return best;
}

LiftingOutcome search_lifting(const ChainFamily& family, int budget) {
  if (budget < 0 || budget > family.depth()) {
    throw std::invalid_argument("search_lifting: budget must be in [0, depth]");
  }
  LiftingOutcome outcome;

  // Fixed region: nodes at levels >= budget are untouchable, so any violation
  // there refutes every candidate.
  LiftingCandidate empty;
  empty.budget = budget;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      for (const TreeNode& node : pair_candidates(empty, family, i, j)) {
        if (node.length() < static_cast<std::size_t>(budget) ||
            node.length() > static_cast<std::size_t>(family.depth())) {
          continue;
        }
        if (family.member(node, i) && !family.member(node, j)) {
          outcome.verdict = LiftingVerdict::Unsat;
          outcome.blocking = ChainViolationTriple{i, j, node};
          return outcome;
        }
      }
    }
  }

  // Free region: per node the constraint is just monotonicity of the bit
  // vector, so the union repair C_x = max over y <= x is always feasible.
  LiftingCandidate candidate;
  candidate.budget = budget;
  candidate.modifications.resize(family.size());
  try {
    for_each_node(family.kind(), 0, budget - 1, [&](const TreeNode& node) {
      bool running_or = false;
      for (std::size_t i = 0; i < family.size(); ++i) {
        const bool base = family.member(node, i);
        running_or = running_or || base;
        if (running_or && !base) candidate.modifications[i].added.push_back(node);
      }
    });
  } catch (const BudgetError&) {
    outcome.verdict = LiftingVerdict::Unknown;
    return outcome;
  }
  outcome.verdict = LiftingVerdict::Sat;
  outcome.candidate = std::move(candidate);
  return outcome;
}

std::optional<Falsification> falsify(const ChainFamily& family, int budget) {
  if (family.kind() != TreeKind::Dyadic) {
    throw KindMismatchError("falsify: dyadic kind only");
  }
  std::optional<Falsification> best;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const std::size_t m = family.pair_divergence(i, j);
      if (m <= static_cast<std::size_t>(budget)) continue;
      if (m + 1 > static_cast<std::size_t>(family.depth())) continue;
      const TreeNode sigma = family.generator(i).prefix_node(m).child(0);
      if (!family.member(sigma, i) || family.member(sigma, j)) continue;
      if (!best || m > best->m) {
        best = Falsification{i, j, sigma, m, budget};
      }
    }
  }
  return best;
}

bool falsification_valid(const Falsification& certificate, const ChainFamily& family) {
  if (certificate.x_index >= family.size() || certificate.y_index >= family.size()) {
    return false;
  }
  if (certificate.x_index >= certificate.y_index) return false;
  const Branch& x = family.generator(certificate.x_index);
  const Branch& y = family.generator(certificate.y_index);
  const std::size_t m = certificate.m;
  if (m <= static_cast<std::size_t>(certificate.budget)) return false;
  if (divergence_index(x, y) != m) return false;
  if (x.at(m) != 0 || y.at(m) != 1) return false;
  if (certificate.sigma != x.prefix_node(m).child(0)) return false;
  return family.member(certificate.sigma, certificate.x_index) &&
         !family.member(certificate.sigma, certificate.y_index);
}

}  // namespace chainline
