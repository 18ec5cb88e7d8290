#include "chainline/eta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chainline {

Tube Tube::from_membership(const MembershipVector& vec, double eps) {
  Tube tube;
  tube.eps = eps;
  tube.targets.reserve(vec.bits.size() + 1);
  for (std::uint8_t bit : vec.bits) tube.targets.push_back(bit);
  tube.targets.push_back(1.0);
  return tube;
}

double min_norm_taut_string(const Tube& tube) {
  if (tube.eps < 0) throw std::invalid_argument("min_norm_taut_string: negative eps");
  // Interval of endpoints reachable at the current cost; pay only when the
  // next tube forces the interval to move. The wings of the cost function
  // have slope one, so collapsing to the nearest tube endpoint is exact.
  double cost = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  for (double target : tube.targets) {
    const double l = target - tube.eps;
    const double u = target + tube.eps;
    if (hi < l) {
      cost += l - hi;
      lo = hi = l;
    } else if (lo > u) {
      cost += lo - u;
      lo = hi = u;
    } else {
      lo = std::max(lo, l);
      hi = std::min(hi, u);
    }
  }
  return cost;
}

double min_norm_lp_oracle(const Tube& tube) {
  if (tube.targets.size() > 14) {
    throw BudgetError("min_norm_lp_oracle: more than 14 targets");
  }
  if (tube.eps < 0) throw std::invalid_argument("min_norm_lp_oracle: negative eps");
  // Value iteration over the breakpoint grid. Every intermediate cost
  // function is piecewise linear with breakpoints on the grid, so the
  // restriction to grid points is lossless.
  std::vector<double> grid{0.0};
  for (double t : tube.targets) {
    grid.push_back(t - tube.eps);
    grid.push_back(t + tube.eps);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::size_t n = grid.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> cost(n, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    if (grid[i] == 0.0) cost[i] = 0.0;
  }
  std::vector<double> moved(n);
  for (double target : tube.targets) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = kInf;
      for (std::size_t j = 0; j < n; ++j) {
        if (cost[j] == kInf) continue;
        best = std::min(best, cost[j] + std::abs(grid[i] - grid[j]));
      }
      moved[i] = best;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const bool inside = grid[i] >= target - tube.eps && grid[i] <= target + tube.eps;
      cost[i] = inside ? moved[i] : kInf;
    }
  }
  double best = kInf;
  for (double c : cost) best = std::min(best, c);
  return best;
}

namespace {

bool node_before(const TreeNode& a, const TreeNode& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  return lex_compare(a, b) == std::strong_ordering::less;
}

}  // namespace

EtaDetail eta_lower_detail(const ChainFamily& family, int horizon, double eps,
                           int max_level) {
  if (max_level < 0 || max_level > family.depth()) max_level = family.depth();
  if (horizon < 0) horizon = 0;
  EtaDetail detail;
  if (family.size() == 0 || horizon > max_level) return detail;

  // Candidate nodes: generator prefixes and their 0-children in the level
  // range. A node whose vector has a descent must have a generator through
  // its parent's qualifying sibling, hence is of this shape; all other
  // vectors are monotone and already realized by plain prefixes.
  std::vector<TreeNode> candidates;
  for (const Branch& g : family.generators()) {
    for (int level = horizon; level <= max_level; ++level) {
      candidates.push_back(g.prefix_node(static_cast<std::size_t>(level)));
      if (level >= 1 && g.at(static_cast<std::size_t>(level - 1)) != 0) {
        candidates.push_back(
            g.prefix_node(static_cast<std::size_t>(level - 1)).child(0));
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), node_before);
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  detail.candidates = candidates.size();
  for (const TreeNode& node : candidates) {
    const double value =
        min_norm_taut_string(Tube::from_membership(membership_vector(node, family), eps));
    if (value > detail.value) {
      detail.value = value;
      detail.argmax = node;
    }
  }
  return detail;
}

double eta_lower_estimate(const ChainFamily& family, int horizon, double eps,
                          int max_level) {
  return eta_lower_detail(family, horizon, eps, max_level).value;
}

std::vector<int> child_hit_set(const ChainFamily& family, const TreeNode& base) {
  std::vector<int> hits;
  const std::size_t n = base.length();
  for (const Branch& g : family.generators()) {
    if (first_difference(base, g) != kNoDifference) continue;
    hits.push_back(g.at(n));
  }
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  return hits;
}

double density_profile(const ChainFamily& family, const Branch& y, int level) {
  if (family.kind() != TreeKind::Factorial) {
    throw KindMismatchError("density_profile: factorial kind only");
  }
  const TreeNode base = y.prefix_node(static_cast<std::size_t>(level));
  const auto hits = child_hit_set(family, base);
  return static_cast<double>(hits.size()) / static_cast<double>(level + 1);
}

CountingReport verify_counting_claims(const std::vector<int>& hit_set, int p, int k, int n) {
  if (p < 1 || k < 1 || n + 1 != 2 * p * k) {
    throw std::invalid_argument("verify_counting_claims: need n + 1 = 2pk");
  }
  CountingReport report;
  const auto size = static_cast<long long>(hit_set.size());
  report.claim1 = size * (2 * p + 1) >= 2LL * p * (n + 1);
  report.claim2 = true;
  for (int i = 0; i < p; ++i) {
    IntervalStat stat;
    stat.begin = 2 * k * i;
    for (int m : hit_set) {
      if (m < stat.begin || m >= stat.begin + 2 * k) continue;
      ++stat.hits;
      if (m % 2 == 0) stat.has_even = true;
      if (m % 2 == 1) stat.has_odd = true;
    }
    if (stat.hits <= k) report.claim2 = false;
    report.intervals.push_back(stat);
  }
  report.pass = report.claim1 && report.claim2;
  return report;
}

WitnessSearchResult find_alternating_witness(const ChainFamily& family, int p) {
  if (family.kind() != TreeKind::Factorial) {
    throw KindMismatchError("find_alternating_witness: factorial kind only");
  }
  if (p < 1) throw std::invalid_argument("find_alternating_witness: p must be positive");
  WitnessSearchResult result;
  if (family.size() == 0) return result;

  if (p == 1) {
    // The root lies in every A_x.
    AlternatingWitness witness{TreeNode::root(family.kind()), {0}, 1};
    result.witness = std::move(witness);
    result.best_density = 1.0;
    return result;
  }

  const auto& gens = family.generators();
  for (int k = 1; 2 * p * k <= family.depth(); ++k) {
    const int n = 2 * p * k - 1;  // sigma = base^0 has level n + 1 <= depth
    // Generators sharing an n-prefix are adjacent in sorted order.
    std::size_t begin = 0;
    while (begin < gens.size()) {
      std::size_t end = begin + 1;
      while (end < gens.size() &&
             first_difference(gens[begin].prefix_node(static_cast<std::size_t>(n)),
                              gens[end]) == kNoDifference) {
        ++end;
      }
      std::vector<int> hits;
      for (std::size_t g = begin; g < end; ++g) {
        hits.push_back(gens[g].at(static_cast<std::size_t>(n)));
      }
      std::sort(hits.begin(), hits.end());
      hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
      result.best_density = std::max(
          result.best_density, static_cast<double>(hits.size()) / static_cast<double>(n + 1));

      const CountingReport claims = verify_counting_claims(hits, p, k, n);
      if (claims.pass) {
        // Parity-alternating child indices, one per interval.
        std::vector<int> picks;
        for (int i = 0; i < p; ++i) {
          const int lo = 2 * k * i;
          const int want = i % 2;
          int found = -1;
          for (int m : hits) {
            if (m >= lo && m < lo + 2 * k && m % 2 == want) {
              found = m;
              break;
            }
          }
          if (found < 0) break;
          picks.push_back(found);
        }
        if (static_cast<int>(picks.size()) == p) {
          const TreeNode base = gens[begin].prefix_node(static_cast<std::size_t>(n));
          const TreeNode sigma = base.child(0);
          std::vector<std::size_t> indices;
          for (int m : picks) {
            for (std::size_t g = begin; g < end; ++g) {
              if (gens[g].at(static_cast<std::size_t>(n)) == m) {
                indices.push_back(g);
                break;
              }
            }
          }
          bool valid = indices.size() == static_cast<std::size_t>(p);
          for (std::size_t j = 0; valid && j < indices.size(); ++j) {
            const bool expected = j % 2 == 0;
            if (a_membership(sigma, gens[indices[j]]) != expected) valid = false;
            if (j + 1 < indices.size() && indices[j] >= indices[j + 1]) valid = false;
          }
          if (valid) {
            result.witness = AlternatingWitness{sigma, std::move(indices), p};
            return result;
          }
        }
      }
      begin = end;
    }
  }
  return result;
}

}  // namespace chainline
