#pragma once

#include <cstdint>
#include <string>

#include "chainline/chain.hpp"
#include "chainline/reduction.hpp"

namespace chainline {

// Batch configuration shared by the CLI commands. A fixed seed makes every
// run fully deterministic end to end.
struct ExperimentConfig {
  std::string construction = "dyadic41";  // dyadic41 | factorial53 | custom
  std::string chain_file;                 // generators for construction=custom
  int generator_count = 256;
  int depth = 20;
  int horizon = 10;
  double eps = 0.25;
  double delta = 0.5;
  int k_max = 8;
  int p_max = 6;
  std::uint64_t seed = 1;
  int prefix_length = 0;  // 0 = kind-specific default
  std::string tail_word;  // literal; empty = kind-specific default
  int max_exceptional = 16;
  int retry_budget = 1000;
  std::string out;
  std::string report;

  void validate() const;
  std::string canonical_json() const;  // key-sorted dump used for the config hash
};

// Dyadic generators sampled independently: random prefix, periodic tail.
ChainFamily build_dyadic41(const ExperimentConfig& config);

// Factorial generators with deliberate density clusters: for each p up to
// p_max a base prefix of length 2p - 1 is extended through every child, so
// some prefix reaches full child coverage the way a positive-density set
// does in the limit; the rest of the quota is sampled uniformly.
ChainFamily build_factorial53(const ExperimentConfig& config);

// Dispatches on config.construction (loads chain_file for custom).
ChainFamily build_family(const ExperimentConfig& config);

// The explicit witness family over all nodes up to max_level, optionally with
// noise: noise_entries three-atom entries get two extra cuts of weight
// +-delta/8 each, keeping them within threshold granularity.
MeasureFamily make_witness_family(const ChainFamily& family, int max_level,
                                  int noise_entries, Rng rng, const Rational& delta);

}  // namespace chainline
