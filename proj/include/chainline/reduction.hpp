#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "chainline/measure.hpp"

namespace chainline {

struct MeasureFamilyEntry {
  TreeNode node;
  SignedMeasure measure;
};

// One signed measure per isolated point (tree node), with the sup of the
// total variations as the family bound. Entries are kept in node lex order.
struct MeasureFamily {
  std::vector<MeasureFamilyEntry> entries;
  Rational bound;

  static MeasureFamily build(std::vector<MeasureFamilyEntry> entries);
};

// Least k >= 1 with bound < 2k + 1.
int least_norm_bracket(const Rational& bound);

struct ThresholdPoints {
  std::vector<CutPoint> points;  // x^0 <= ... <= x^{2k-2} on success
  std::optional<int> failed_index;
  bool ok() const { return !failed_index.has_value(); }
};

// Walks the cut universe (support of mu, the extra cuts, Bottom and Top, in
// order) and records the minimal cut satisfying each nested cumulative-mass
// threshold:
//   i = 2j:     pos >= j + 1 - delta / 2^(k - 2j)
//   i = 2j + 1: neg >= j + 1 - delta / 2^(k - 2(j+1))
// The first unreached index is reported as the failure.
ThresholdPoints threshold_points(const SignedMeasure& mu, int k, const Rational& delta,
                                 std::span<const CutPoint> extra_cuts);

struct ThresholdProfile {
  int k = 0;
  Rational delta;
  std::vector<std::pair<TreeNode, ThresholdPoints>> entries;
};

ThresholdProfile build_threshold_profile(const MeasureFamily& family, int k,
                                         const Rational& delta,
                                         std::span<const CutPoint> extra_cuts);

struct ExceptionalCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReduceResult {
  MeasureFamily family;
  std::vector<TreeNode> exceptional;  // entries whose threshold walk failed
  int k = 0;
};

// Replaces every entry of total variation above 2k - 1 - delta/4 by the
// alternating Dirac combination at its threshold points; smaller entries and
// exceptional ones pass through unchanged. k defaults to the least bracket of
// the family bound; requires bound + 3*delta < 2k + 1. Throws
// ExceptionalCapError when more than max_exceptional entries fail the walk.
ReduceResult reduce_family(const MeasureFamily& family, const Rational& delta,
                           std::span<const CutPoint> extra_cuts, int max_exceptional,
                           std::optional<int> k_override = std::nullopt);

// Branch cuts of all generators, sorted.
std::vector<CutPoint> generator_cuts(const ChainFamily& family);

struct ClosenessViolation {
  TreeNode node;
  std::optional<std::size_t> generator_index;  // nullopt = total-mass target
  Rational deviation;
  bool beyond_horizon = false;
};

struct ClosenessReport {
  bool pass = true;
  int horizon = 0;
  std::size_t entries_checked = 0;
  Rational max_deviation_beyond;       // over nodes at levels >= horizon
  std::vector<ClosenessViolation> violations;
};

// PASS iff |mu_sigma(A_x) - [sigma in A_x]| < eps for every generator x and
// |mu_sigma(K) - 1| < eps, for every entry with |sigma| >= horizon.
// Deviations below the horizon are reported but tolerated.
ClosenessReport closeness_check(const MeasureFamily& family, const ChainFamily& chain,
                                int horizon, const Rational& eps);

using EntrySource = std::function<std::optional<MeasureFamilyEntry>()>;

// Streaming variant for families too large to materialize.
ClosenessReport closeness_scan(const EntrySource& next, const ChainFamily& chain,
                               int horizon, const Rational& eps);

}  // namespace chainline
