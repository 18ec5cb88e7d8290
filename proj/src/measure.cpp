#include "chainline/measure.hpp"

#include <algorithm>

namespace chainline {

std::strong_ordering cut_compare(const CutPoint& a, const CutPoint& b) {
  auto rank = [](const CutPoint& c) { return c.is_bottom() ? 0 : c.is_top() ? 2 : 1; };
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb) return ra <=> rb;
  if (ra != 1) return std::strong_ordering::equal;  // both bottom or both top
  if (a.is_node() && b.is_node()) return lex_compare(a.node(), b.node());
  if (a.is_node()) return lex_compare(a.node(), b.branch());
  if (b.is_node()) return lex_compare(a.branch(), b.node());
  return lex_compare(a.branch(), b.branch());
}

bool cut_below_branch(const CutPoint& cut, const Branch& x) {
  if (cut.is_bottom()) return true;
  if (cut.is_top()) return false;
  if (cut.is_node()) return lex_compare(cut.node(), x) == std::strong_ordering::less;
  return lex_compare(cut.branch(), x) == std::strong_ordering::less;
}

SignedMeasure::SignedMeasure(std::vector<std::pair<CutPoint, Rational>> atoms)
    : atoms_(std::move(atoms)) {
  std::stable_sort(atoms_.begin(), atoms_.end(), [](const auto& a, const auto& b) {
    return cut_compare(a.first, b.first) == std::strong_ordering::less;
  });
  std::vector<std::pair<CutPoint, Rational>> merged;
  for (auto& atom : atoms_) {
    if (!merged.empty() && merged.back().first == atom.first) {
      merged.back().second += atom.second;
      if (merged.back().second == 0) merged.pop_back();
    } else if (atom.second != 0) {
      merged.push_back(std::move(atom));
    }
  }
  atoms_ = std::move(merged);
}

SignedMeasure SignedMeasure::dirac(CutPoint cut, Rational weight) {
  return SignedMeasure({{std::move(cut), std::move(weight)}});
}

Rational SignedMeasure::evaluate(const Branch& x) const {
  Rational sum;
  for (const auto& [cut, weight] : atoms_) {
    if (cut_below_branch(cut, x)) sum += weight;
  }
  return sum;
}

Rational SignedMeasure::total_mass() const {
  Rational sum;
  for (const auto& [cut, weight] : atoms_) sum += weight;
  return sum;
}

Rational SignedMeasure::total_variation() const {
  Rational sum;
  for (const auto& [cut, weight] : atoms_) sum += abs(weight);
  return sum;
}

std::pair<Rational, Rational> SignedMeasure::cumulative(const CutPoint& x) const {
  Rational pos;
  Rational neg;
  for (const auto& [cut, weight] : atoms_) {
    if (cut_compare(cut, x) == std::strong_ordering::greater) break;
    if (weight > 0) {
      pos += weight;
    } else {
      neg -= weight;
    }
  }
  return {pos, neg};
}

SignedMeasure SignedMeasure::scaled(const Rational& factor) const {
  std::vector<std::pair<CutPoint, Rational>> atoms = atoms_;
  for (auto& atom : atoms) atom.second *= factor;
  return SignedMeasure(std::move(atoms));
}

SignedMeasure SignedMeasure::plus(const SignedMeasure& other) const {
  std::vector<std::pair<CutPoint, Rational>> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  return SignedMeasure(std::move(atoms));
}

std::optional<std::vector<long long>> SignedMeasure::integer_weights() const {
  std::vector<long long> weights;
  weights.reserve(atoms_.size());
  for (const auto& [cut, weight] : atoms_) {
    if (denominator(weight) != 1) return std::nullopt;
    weights.push_back(numerator(weight).convert_to<long long>());
  }
  return weights;
}

SignedMeasure witness_measure(const TreeNode& sigma) {
  if (sigma.kind() != TreeKind::Dyadic) {
    throw KindMismatchError("witness_measure: dyadic nodes only");
  }
  const std::size_t n = sigma.length();
  if (n == 0 || sigma.back() == 1) {
    return SignedMeasure::dirac(CutPoint(sigma));
  }
  const TreeNode sigma_prime = sigma.prefix(n - 1).child(1);
  // Greatest m < n-1 with sigma(m) = 0, if any; absent exactly when the head
  // is all ones. In that case the alternation pattern has no node to return
  // to, so the balancing atom sits at the greatest element of the line: it
  // contributes 0 against every generator and restores total mass 1, which
  // the closeness contract demands of every entry.
  std::size_t m = n - 1;
  while (m > 0 && sigma.at(m - 1) == 1) --m;
  if (m == 0) {
    return SignedMeasure({{CutPoint(sigma), Rational(1)},
                          {CutPoint(sigma_prime), Rational(-1)},
                          {CutPoint::top(), Rational(1)}});
  }
  const TreeNode sigma_second = sigma.prefix(m - 1).child(1);
  return SignedMeasure({{CutPoint(sigma), Rational(1)},
                        {CutPoint(sigma_prime), Rational(-1)},
                        {CutPoint(sigma_second), Rational(1)}});
}

namespace {

// Integer evaluation of a witness-style measure against one generator.
long long evaluate_int(const std::vector<std::pair<CutPoint, Rational>>& atoms,
                       const std::vector<long long>& weights, const Branch& x) {
  long long value = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (cut_below_branch(atoms[i].first, x)) value += weights[i];
  }
  return value;
}

}  // namespace

WitnessReport verify_witness_claim(const TreeNode& sigma, const ChainFamily& family) {
  WitnessReport report;
  const SignedMeasure mu = witness_measure(sigma);
  const auto weights = mu.integer_weights();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Branch& x = family.generator(i);
    const long long value = evaluate_int(mu.atoms(), *weights, x);
    const int expected = a_membership(sigma, x) ? 1 : 0;
    if (value != expected) {
      report.pass = false;
      report.counterexample = WitnessCounterexample{sigma, i, value, expected};
      return report;
    }
  }
  return report;
}

WitnessFamilyReport verify_witness_family(const ChainFamily& family, int max_level) {
  WitnessFamilyReport report;
  report.max_total_variation = Rational(0);
  if (max_level < 0) max_level = family.depth();
  long long max_atoms = 0;
  for_each_node(family.kind(), 0, max_level, [&](const TreeNode& sigma) {
    if (!report.pass) return;
    const SignedMeasure mu = witness_measure(sigma);
    const auto weights = mu.integer_weights();
    // Witness atoms are distinct cuts with unit weights, so the variation is
    // the atom count.
    max_atoms = std::max(max_atoms, static_cast<long long>(mu.atoms().size()));
    for (std::size_t i = 0; i < family.size(); ++i) {
      const long long value = evaluate_int(mu.atoms(), *weights, family.generator(i));
      const int expected = a_membership(sigma, family.generator(i)) ? 1 : 0;
      ++report.checked_pairs;
      if (value != expected) {
        report.pass = false;
        report.counterexample = WitnessCounterexample{sigma, i, value, expected};
        return;
      }
    }
  });
  report.max_total_variation = Rational(max_atoms);
  return report;
}

bool delta_point(const TreeNode& sigma, const Branch& x) { return a_membership(sigma, x); }

}  // namespace chainline
