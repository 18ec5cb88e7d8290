#include "chainline/experiments.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "chainline/io.hpp"

namespace chainline {

void ExperimentConfig::validate() const {
  if (construction != "dyadic41" && construction != "factorial53" &&
      construction != "custom") {
    throw std::invalid_argument("config: unknown construction " + construction);
  }
  if (construction == "custom" && chain_file.empty()) {
    throw std::invalid_argument("config: custom construction needs a chain file");
  }
  if (generator_count < 1) throw std::invalid_argument("config: generator_count < 1");
  if (depth < 0) throw std::invalid_argument("config: negative depth");
  if (horizon < 0 || horizon > depth) {
    throw std::invalid_argument("config: need 0 <= horizon <= depth");
  }
  if (eps <= 0) throw std::invalid_argument("config: eps must be positive");
  if (delta <= 0) throw std::invalid_argument("config: delta must be positive");
  if (k_max < 1) throw std::invalid_argument("config: k_max < 1");
  if (p_max < 1) throw std::invalid_argument("config: p_max < 1");
  if (max_exceptional < 0) throw std::invalid_argument("config: max_exceptional < 0");
}

std::string ExperimentConfig::canonical_json() const {
  std::ostringstream out;
  out << "{\"chain_file\":\"" << chain_file << "\",\"construction\":\"" << construction
      << "\",\"delta\":" << delta << ",\"depth\":" << depth << ",\"eps\":" << eps
      << ",\"generator_count\":" << generator_count << ",\"horizon\":" << horizon
      << ",\"k_max\":" << k_max << ",\"max_exceptional\":" << max_exceptional
      << ",\"p_max\":" << p_max << ",\"prefix_length\":" << prefix_length
      << ",\"retry_budget\":" << retry_budget << ",\"seed\":" << seed
      << ",\"tail_word\":\"" << tail_word << "\"}";
  return out.str();
}

namespace {

struct SamplingPlan {
  std::size_t prefix_length;
  std::vector<Symbol> tail_word;
};

SamplingPlan sampling_plan(TreeKind kind, const ExperimentConfig& config) {
  SamplingPlan plan;
  if (config.prefix_length > 0) {
    plan.prefix_length = static_cast<std::size_t>(config.prefix_length);
  } else {
    plan.prefix_length = kind == TreeKind::Dyadic
                             ? static_cast<std::size_t>(config.depth) + 4
                             : 14;
  }
  if (!config.tail_word.empty()) {
    for (char c : config.tail_word) {
      if (c == ',') continue;
      plan.tail_word.push_back(c - '0');
    }
  } else {
    plan.tail_word = kind == TreeKind::Dyadic ? std::vector<Symbol>{1, 0}
                                              : std::vector<Symbol>{0};
  }
  return plan;
}

void insert_unique(std::vector<Branch>& branches, Branch branch, int retry_budget,
                   int& collisions) {
  if (std::find(branches.begin(), branches.end(), branch) != branches.end()) {
    if (++collisions > retry_budget) {
      throw std::runtime_error("generator sampling: collision retry budget exceeded");
    }
    return;
  }
  branches.push_back(std::move(branch));
}

}  // namespace

ChainFamily build_dyadic41(const ExperimentConfig& config) {
  const SamplingPlan plan = sampling_plan(TreeKind::Dyadic, config);
  Rng rng = Rng(config.seed).split("build/dyadic41");
  const TailPolicy policy{plan.prefix_length, plan.tail_word};
  std::vector<Branch> branches;
  int collisions = 0;
  while (branches.size() < static_cast<std::size_t>(config.generator_count)) {
    insert_unique(branches, sample_branch(TreeKind::Dyadic, rng, policy),
                  config.retry_budget, collisions);
  }
  return ChainFamily(TreeKind::Dyadic, std::move(branches), config.depth);
}

ChainFamily build_factorial53(const ExperimentConfig& config) {
  const SamplingPlan plan = sampling_plan(TreeKind::Factorial, config);
  Rng cluster_rng = Rng(config.seed).split("build/factorial53/clusters");
  Rng fill_rng = Rng(config.seed).split("build/factorial53/fill");

  std::vector<Branch> branches;
  int collisions = 0;

  for (int p = 2; p <= config.p_max; ++p) {
    const int n = 2 * p - 1;
    if (n + 1 > config.depth) break;
    if (branches.size() + static_cast<std::size_t>(n) + 1 >
        static_cast<std::size_t>(config.generator_count)) {
      break;
    }
    const std::size_t prefix_length =
        std::max(plan.prefix_length, static_cast<std::size_t>(n) + 2);
    std::vector<Symbol> base(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < base.size(); ++i) {
      base[i] = static_cast<Symbol>(cluster_rng.bounded(i + 1));
    }
    for (Symbol child = 0; child <= n; ++child) {
      std::vector<Symbol> prefix = base;
      prefix.push_back(child);
      for (std::size_t i = prefix.size(); i < prefix_length; ++i) {
        prefix.push_back(static_cast<Symbol>(cluster_rng.bounded(i + 1)));
      }
      insert_unique(branches,
                    Branch(TreeKind::Factorial, std::move(prefix), plan.tail_word),
                    config.retry_budget, collisions);
    }
  }

  const TailPolicy policy{plan.prefix_length, plan.tail_word};
  while (branches.size() < static_cast<std::size_t>(config.generator_count)) {
    insert_unique(branches, sample_branch(TreeKind::Factorial, fill_rng, policy),
                  config.retry_budget, collisions);
  }
  return ChainFamily(TreeKind::Factorial, std::move(branches), config.depth);
}

ChainFamily build_family(const ExperimentConfig& config) {
  config.validate();
  if (config.construction == "dyadic41") return build_dyadic41(config);
  if (config.construction == "factorial53") return build_factorial53(config);
  return io::chain_family_from_json(io::load_json_file(config.chain_file));
}

MeasureFamily make_witness_family(const ChainFamily& family, int max_level,
                                  int noise_entries, Rng rng, const Rational& delta) {
  if (family.kind() != TreeKind::Dyadic) {
    throw KindMismatchError("make_witness_family: dyadic kind only");
  }
  std::vector<MeasureFamilyEntry> entries;
  std::vector<std::size_t> three_atom_indices;
  for_each_node(family.kind(), 0, max_level, [&](const TreeNode& node) {
    SignedMeasure mu = witness_measure(node);
    if (mu.atoms().size() == 3) three_atom_indices.push_back(entries.size());
    entries.push_back(MeasureFamilyEntry{node, std::move(mu)});
  });

  // Sub-threshold noise: two extra node cuts of weight +-delta/8 on distinct
  // randomly chosen three-atom entries. Keeps each entry within delta/4 of
  // its witness, so the threshold walk lands on the original cuts.
  const Rational noise = delta / 8;
  for (std::size_t i = three_atom_indices.size(); i > 1; --i) {
    std::swap(three_atom_indices[i - 1], three_atom_indices[rng.bounded(i)]);
  }
  const std::size_t noised =
      std::min(three_atom_indices.size(), static_cast<std::size_t>(std::max(0, noise_entries)));
  for (std::size_t added = 0; added < noised; ++added) {
    MeasureFamilyEntry& entry = entries[three_atom_indices[added]];
    std::vector<Symbol> a;
    std::vector<Symbol> b;
    const auto len = 1 + rng.bounded(static_cast<std::uint64_t>(std::max(1, max_level)));
    for (std::uint64_t i = 0; i < len; ++i) {
      a.push_back(static_cast<Symbol>(rng.bounded(2)));
      b.push_back(static_cast<Symbol>(rng.bounded(2)));
    }
    entry.measure = entry.measure.plus(SignedMeasure(
        {{CutPoint(TreeNode(family.kind(), std::move(a))), noise},
         {CutPoint(TreeNode(family.kind(), std::move(b))), -noise}}));
  }
  return MeasureFamily::build(std::move(entries));
}

}  // namespace chainline
