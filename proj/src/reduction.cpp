#include "chainline/reduction.hpp"

#include <algorithm>

namespace chainline {

namespace {

bool node_before(const TreeNode& a, const TreeNode& b) {
  return lex_compare(a, b) == std::strong_ordering::less;
}

}  // namespace

MeasureFamily MeasureFamily::build(std::vector<MeasureFamilyEntry> entries) {
  MeasureFamily family;
  family.entries = std::move(entries);
  std::sort(family.entries.begin(), family.entries.end(),
            [](const MeasureFamilyEntry& a, const MeasureFamilyEntry& b) {
              return node_before(a.node, b.node);
            });
  family.bound = Rational(0);
  for (const auto& entry : family.entries) {
    family.bound = std::max(family.bound, entry.measure.total_variation());
  }
  return family;
}

int least_norm_bracket(const Rational& bound) {
  int k = 1;
  while (bound >= Rational(2 * k + 1)) ++k;
  return k;
}

namespace {

// Threshold for index i of the nested cumulative conditions.
Rational threshold_value(int i, int k, const Rational& delta) {
  if (i % 2 == 0) {
    const int j = i / 2;
    return Rational(j + 1) - delta / pow2(k - 2 * j);
  }
  const int j = (i - 1) / 2;
  return Rational(j + 1) - delta / pow2(k - 2 * (j + 1));
}

}  // namespace

ThresholdPoints threshold_points(const SignedMeasure& mu, int k, const Rational& delta,
                                 std::span<const CutPoint> extra_cuts) {
  if (k < 1) throw std::invalid_argument("threshold_points: k must be positive");
  if (delta <= 0) throw std::invalid_argument("threshold_points: delta must be positive");

  // Universe: support cuts, extra cuts, Bottom and Top, merged in order. The
  // cumulative pair is a step function changing only at support cuts, so the
  // minimum over this universe realizes the infimum exactly.
  std::vector<CutPoint> universe;
  universe.reserve(mu.atoms().size() + extra_cuts.size() + 2);
  universe.push_back(CutPoint::bottom());
  for (const auto& [cut, weight] : mu.atoms()) universe.push_back(cut);
  universe.insert(universe.end(), extra_cuts.begin(), extra_cuts.end());
  universe.push_back(CutPoint::top());
  std::sort(universe.begin(), universe.end(), [](const CutPoint& a, const CutPoint& b) {
    return cut_compare(a, b) == std::strong_ordering::less;
  });
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

  const int point_count = 2 * k - 1;
  ThresholdPoints result;
  result.points.reserve(point_count);

  Rational pos;
  Rational neg;
  std::size_t atom_index = 0;
  const auto& atoms = mu.atoms();
  int current = 0;
  for (const CutPoint& cut : universe) {
    while (atom_index < atoms.size() &&
           cut_compare(atoms[atom_index].first, cut) != std::strong_ordering::greater) {
      const Rational& w = atoms[atom_index].second;
      if (w > 0) {
        pos += w;
      } else {
        neg -= w;
      }
      ++atom_index;
    }
    while (current < point_count) {
      const Rational bound = threshold_value(current, k, delta);
      const bool met = (current % 2 == 0) ? pos >= bound : neg >= bound;
      if (!met) break;
      result.points.push_back(cut);
      ++current;
    }
    if (current == point_count) break;
  }
  if (current < point_count) {
    result.failed_index = current;
    result.points.clear();
  }
  return result;
}

ThresholdProfile build_threshold_profile(const MeasureFamily& family, int k,
                                         const Rational& delta,
                                         std::span<const CutPoint> extra_cuts) {
  ThresholdProfile profile;
  profile.k = k;
  profile.delta = delta;
  profile.entries.reserve(family.entries.size());
  for (const auto& entry : family.entries) {
    profile.entries.emplace_back(entry.node,
                                 threshold_points(entry.measure, k, delta, extra_cuts));
  }
  return profile;
}

ReduceResult reduce_family(const MeasureFamily& family, const Rational& delta,
                           std::span<const CutPoint> extra_cuts, int max_exceptional,
                           std::optional<int> k_override) {
  const int k = k_override.value_or(least_norm_bracket(family.bound));
  if (family.bound >= Rational(2 * k + 1)) {
    throw std::invalid_argument("reduce_family: family bound not below 2k+1");
  }
  if (delta <= 0 || family.bound + 3 * delta >= Rational(2 * k + 1)) {
    throw std::invalid_argument("reduce_family: need bound + 3*delta < 2k+1");
  }
  const Rational passthrough_bound = Rational(2 * k - 1) - delta / 4;

  ReduceResult result;
  result.k = k;
  std::vector<MeasureFamilyEntry> reduced;
  reduced.reserve(family.entries.size());
  for (const auto& entry : family.entries) {
    if (entry.measure.total_variation() <= passthrough_bound) {
      reduced.push_back(entry);
      continue;
    }
    ThresholdPoints walk = threshold_points(entry.measure, k, delta, extra_cuts);
    if (!walk.ok()) {
      result.exceptional.push_back(entry.node);
      if (static_cast<int>(result.exceptional.size()) > max_exceptional) {
        throw ExceptionalCapError("reduce_family: more than " +
                                  std::to_string(max_exceptional) + " exceptional entries");
      }
      reduced.push_back(entry);
      continue;
    }
    std::vector<std::pair<CutPoint, Rational>> atoms;
    atoms.reserve(walk.points.size());
    for (std::size_t i = 0; i < walk.points.size(); ++i) {
      atoms.emplace_back(walk.points[i], Rational(i % 2 == 0 ? 1 : -1));
    }
    reduced.push_back(MeasureFamilyEntry{entry.node, SignedMeasure(std::move(atoms))});
  }
  result.family = MeasureFamily::build(std::move(reduced));
  return result;
}

std::vector<CutPoint> generator_cuts(const ChainFamily& family) {
  std::vector<CutPoint> cuts;
  cuts.reserve(family.size());
  for (const Branch& g : family.generators()) cuts.emplace_back(CutPoint(g));
  return cuts;
}

namespace {

void check_entry(const MeasureFamilyEntry& entry, const ChainFamily& chain, int horizon,
                 const Rational& eps, ClosenessReport& report) {
  ++report.entries_checked;
  const bool beyond = entry.node.length() >= static_cast<std::size_t>(horizon);
  const auto int_weights = entry.measure.integer_weights();

  auto record = [&](std::optional<std::size_t> gen, Rational deviation) {
    if (deviation < eps) {
      if (beyond) report.max_deviation_beyond = std::max(report.max_deviation_beyond, deviation);
      return;
    }
    if (beyond) {
      report.pass = false;
      report.max_deviation_beyond = std::max(report.max_deviation_beyond, deviation);
    }
    report.violations.push_back(
        ClosenessViolation{entry.node, gen, std::move(deviation), beyond});
  };

  for (std::size_t i = 0; i < chain.size(); ++i) {
    const int expected = chain.member(entry.node, i) ? 1 : 0;
    if (int_weights) {
      long long value = 0;
      const auto& atoms = entry.measure.atoms();
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        if (cut_below_branch(atoms[a].first, chain.generator(i))) value += (*int_weights)[a];
      }
      const long long dev = value >= expected ? value - expected : expected - value;
      if (dev == 0) continue;
      record(i, Rational(dev));
    } else {
      Rational dev = abs(entry.measure.evaluate(chain.generator(i)) - expected);
      if (dev == 0) continue;
      record(i, std::move(dev));
    }
  }
  Rational mass_dev = abs(entry.measure.total_mass() - 1);
  if (mass_dev != 0) record(std::nullopt, std::move(mass_dev));
}

}  // namespace

ClosenessReport closeness_scan(const EntrySource& next, const ChainFamily& chain,
                               int horizon, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("closeness: eps must be positive");
  ClosenessReport report;
  report.horizon = horizon;
  report.max_deviation_beyond = Rational(0);
  while (auto entry = next()) {
    check_entry(*entry, chain, horizon, eps, report);
  }
  return report;
}

ClosenessReport closeness_check(const MeasureFamily& family, const ChainFamily& chain,
                                int horizon, const Rational& eps) {
  std::size_t index = 0;
  return closeness_scan(
      [&]() -> std::optional<MeasureFamilyEntry> {
        if (index >= family.entries.size()) return std::nullopt;
        return family.entries[index++];
      },
      chain, horizon, eps);
}

}  // namespace chainline
