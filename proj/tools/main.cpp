// chainline: batch experiments on almost-chain families over tree universes.
// Exit codes: 0 = PASS/SAT, 1 = FAIL/UNSAT, 2 = unknown/error.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "chainline/eta.hpp"
#include "chainline/experiments.hpp"
#include "chainline/io.hpp"
#include "chainline/lifting.hpp"

namespace cl = chainline;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct CliState {
  cl::ExperimentConfig config;
  std::string config_file;
  std::string family_file;
  std::string measures_file;
  std::string matrix_csv;
  int noise_entries = 8;
  int measure_depth = -1;
  int sweep_step = 4;
};

// Config file values fill in whatever the command line did not set
// explicitly; flags always win.
void merge_config_file(CLI::App* cmd, CliState& state) {
  if (state.config_file.empty()) return;
  const auto j = cl::io::load_json_file(state.config_file);
  auto& cfg = state.config;
  auto unset = [&](const std::string& flag) { return cmd->count(flag) == 0; };
  auto merge = [&](const char* flag, const char* key, auto& field) {
    using Field = std::remove_reference_t<decltype(field)>;
    if (j.contains(key) && unset(flag)) field = j[key].get<Field>();
  };
  merge("--construction", "construction", cfg.construction);
  merge("--chain-file", "chain_file", cfg.chain_file);
  merge("--generator-count", "generator_count", cfg.generator_count);
  merge("--depth", "depth", cfg.depth);
  merge("--horizon", "horizon", cfg.horizon);
  merge("--eps", "eps", cfg.eps);
  merge("--delta", "delta", cfg.delta);
  merge("--k-max", "k_max", cfg.k_max);
  merge("--p-max", "p_max", cfg.p_max);
  merge("--seed", "seed", cfg.seed);
  merge("--prefix-length", "prefix_length", cfg.prefix_length);
  merge("--tail-word", "tail_word", cfg.tail_word);
  merge("--max-exceptional", "max_exceptional", cfg.max_exceptional);
  merge("--retry-budget", "retry_budget", cfg.retry_budget);
  merge("--out", "out", cfg.out);
  merge("--report", "report", cfg.report);
}

void add_config_options(CLI::App* cmd, CliState& state) {
  auto& cfg = state.config;
  cmd->add_option("--config", state.config_file, "JSON config file; flags override it");
  cmd->add_option("--construction", cfg.construction, "dyadic41 | factorial53 | custom");
  cmd->add_option("--chain-file", cfg.chain_file, "generator file for --construction custom");
  cmd->add_option("--generator-count", cfg.generator_count, "number of sampled generators");
  cmd->add_option("--depth", cfg.depth, "truncation level of the node universe");
  cmd->add_option("--horizon", cfg.horizon, "level below which deviations are tolerated");
  cmd->add_option("--eps", cfg.eps, "closeness / tube tolerance");
  cmd->add_option("--delta", cfg.delta, "threshold slack of the norm reduction");
  cmd->add_option("--k-max", cfg.k_max, "largest modification budget for lift");
  cmd->add_option("--p-max", cfg.p_max, "largest alternation order for sweep");
  cmd->add_option("--seed", cfg.seed, "root seed; fixes all sampling");
  cmd->add_option("--prefix-length", cfg.prefix_length,
                  "sampled prefix length (0 = kind default)");
  cmd->add_option("--tail-word", cfg.tail_word, "periodic tail word for sampling");
  cmd->add_option("--max-exceptional", cfg.max_exceptional,
                  "cap on entries whose threshold walk may fail");
  cmd->add_option("--retry-budget", cfg.retry_budget, "sampling collision retries");
  cmd->add_option("--out", cfg.out, "primary output file");
  cmd->add_option("--report", cfg.report, "report CSV file");
}

cl::ChainFamily resolve_family(const CliState& state) {
  if (!state.family_file.empty()) {
    return cl::io::chain_family_from_json(cl::io::load_json_file(state.family_file));
  }
  return cl::build_family(state.config);
}

std::string config_hash(const CliState& state) {
  return cl::io::fnv1a_hash_hex(state.config.canonical_json());
}

int run_build(CliState& state) {
  state.config.validate();
  const cl::ChainFamily family = cl::build_family(state.config);
  const cl::AlmostChainReport report = cl::verify_almost_chain(family);
  std::cout << "build: " << family.size() << " generators, depth " << family.depth()
            << ", almost-chain " << (report.pass ? "PASS" : "FAIL") << "\n";
  if (!report.pass) {
    for (const auto& pair : report.pairs) {
      if (pair.confined) continue;
      std::cout << "  unconfined pair: generators " << pair.x_index << " < " << pair.y_index
                << ", divergence " << pair.divergence << ", violation set:";
      for (const auto& node : pair.nodes) {
        std::cout << " " << cl::io::format_node(node);
        if (node.length() > pair.divergence + 1) std::cout << "(!)";
      }
      std::cout << "\n";
    }
    return kExitFail;
  }
  if (!state.config.out.empty()) {
    cl::io::save_json_file(cl::io::chain_family_to_json(family), state.config.out);
    std::cout << "wrote " << state.config.out << "\n";
  }
  if (!state.matrix_csv.empty()) {
    std::ofstream out(state.matrix_csv);
    cl::io::write_membership_matrix_csv(family, out, config_hash(state));
    std::cout << "wrote " << state.matrix_csv << "\n";
  }
  return kExitPass;
}

int run_verify_witness(CliState& state) {
  const cl::ChainFamily family = resolve_family(state);
  const cl::WitnessFamilyReport report = cl::verify_witness_family(family);
  std::cout << "verify-witness: " << report.checked_pairs << " (node, generator) pairs, "
            << "max variation " << cl::format_rational(report.max_total_variation) << ", "
            << (report.pass ? "PASS" : "FAIL") << "\n";
  if (!report.pass && report.counterexample) {
    const auto& ce = *report.counterexample;
    std::cout << "  counterexample: node " << cl::io::format_node(ce.sigma) << " generator "
              << cl::io::format_branch(family.generator(ce.generator_index)) << " value "
              << ce.value << " expected " << ce.expected << "\n";
  }
  return report.pass ? kExitPass : kExitFail;
}

int run_eta(CliState& state) {
  const cl::ChainFamily family = resolve_family(state);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!state.config.out.empty()) {
    file.open(state.config.out);
    out = &file;
  }
  *out << "# chainline eta-sweep v1 config=" << config_hash(state) << "\n";
  *out << "depth,horizon,eps,p_max_found,eta_lower\n";
  for (int depth = state.config.horizon; depth <= family.depth();
       depth += state.sweep_step) {
    int p_found = 0;
    if (family.kind() == cl::TreeKind::Factorial) {
      for (int p = 1; p <= state.config.p_max; ++p) {
        cl::ChainFamily truncated(family.kind(), family.generators(), depth);
        if (!cl::find_alternating_witness(truncated, p).witness) break;
        p_found = p;
      }
    }
    const double value =
        cl::eta_lower_estimate(family, state.config.horizon, state.config.eps, depth);
    *out << depth << "," << state.config.horizon << "," << state.config.eps << ","
         << p_found << "," << value << "\n";
  }
  return kExitPass;
}

int run_reduce(CliState& state) {
  const cl::ChainFamily family = resolve_family(state);
  cl::MeasureFamily measures;
  if (!state.measures_file.empty()) {
    measures = cl::io::measure_family_from_json(
        family.kind(), cl::io::load_json_file(state.measures_file));
  } else {
    const int depth = state.measure_depth > 0 ? state.measure_depth
                                              : std::min(family.depth(), 10);
    measures = cl::make_witness_family(family, depth, state.noise_entries,
                                       cl::Rng(state.config.seed).split("reduce/noise"),
                                       cl::rational_from_double(state.config.delta));
  }
  const cl::Rational delta = cl::rational_from_double(state.config.delta);
  const cl::Rational eps = cl::rational_from_double(state.config.eps);
  const auto cuts = cl::generator_cuts(family);

  cl::ReduceResult reduced;
  try {
    reduced = cl::reduce_family(measures, delta, cuts, state.config.max_exceptional);
  } catch (const cl::ExceptionalCapError& error) {
    std::cout << "reduce: " << error.what() << "\n";
    return kExitError;
  }
  const cl::ClosenessReport before =
      cl::closeness_check(measures, family, state.config.horizon, eps);
  const cl::ClosenessReport after =
      cl::closeness_check(reduced.family, family, state.config.horizon, eps * 2);

  std::cout << "reduce: k=" << reduced.k << " input bound "
            << cl::format_rational(measures.bound) << " output bound "
            << cl::format_rational(reduced.family.bound) << " exceptional "
            << reduced.exceptional.size() << "\n";
  std::cout << "closeness before (eps): " << (before.pass ? "PASS" : "FAIL")
            << ", after (2 eps): " << (after.pass ? "PASS" : "FAIL") << "\n";

  if (!state.config.out.empty()) {
    cl::io::save_json_file(cl::io::measure_family_to_json(reduced.family),
                           state.config.out);
    std::cout << "wrote " << state.config.out << "\n";
  }
  if (!state.config.report.empty()) {
    std::ofstream report_file(state.config.report);
    cl::io::write_closeness_csv(after, family, report_file, config_hash(state));
    std::cout << "wrote " << state.config.report << "\n";
  }
  return after.pass ? kExitPass : kExitFail;
}

int run_lift(CliState& state) {
  const cl::ChainFamily family = resolve_family(state);
  nlohmann::json artifacts = nlohmann::json::array();
  int last_exit = kExitPass;
  for (int budget = 1; budget <= state.config.k_max; ++budget) {
    nlohmann::json row;
    row["budget"] = budget;
    const auto certificate = cl::falsify(family, budget);
    if (certificate) {
      row["falsification"] = cl::io::falsification_to_json(*certificate, family);
    }
    const cl::LiftingOutcome outcome = cl::search_lifting(family, budget);
    switch (outcome.verdict) {
      case cl::LiftingVerdict::Sat:
        row["verdict"] = "SAT";
        row["candidate"] = cl::io::candidate_to_json(*outcome.candidate, family);
        last_exit = kExitPass;
        break;
      case cl::LiftingVerdict::Unsat:
        row["verdict"] = "UNSAT";
        last_exit = kExitFail;
        break;
      case cl::LiftingVerdict::Unknown:
        row["verdict"] = "unknown";
        last_exit = kExitError;
        break;
    }
    std::cout << "lift k=" << budget << ": " << row["verdict"].get<std::string>()
              << (certificate ? " (falsification found)" : "") << "\n";
    artifacts.push_back(std::move(row));
  }
  if (!state.config.out.empty()) {
    cl::io::save_json_file(artifacts, state.config.out);
    std::cout << "wrote " << state.config.out << "\n";
  }
  return last_exit;
}

int run_sweep(CliState& state) {
  const cl::ChainFamily family = resolve_family(state);
  if (family.kind() != cl::TreeKind::Factorial) {
    std::cout << "sweep: factorial families only\n";
    return kExitError;
  }
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!state.config.out.empty()) {
    file.open(state.config.out);
    out = &file;
  }
  *out << "# chainline growth-sweep v1 config=" << config_hash(state) << "\n";
  *out << "depth,horizon,eps,p_max_found,eta_lower\n";
  for (int depth = std::max(state.config.horizon, 4); depth <= family.depth();
       depth += state.sweep_step) {
    cl::ChainFamily truncated(family.kind(), family.generators(), depth);
    int p_found = 0;
    for (int p = 1; p <= state.config.p_max; ++p) {
      const auto result = cl::find_alternating_witness(truncated, p);
      if (!result.witness) break;
      p_found = p;
    }
    const double value =
        cl::eta_lower_estimate(family, state.config.horizon, state.config.eps, depth);
    *out << depth << "," << state.config.horizon << "," << state.config.eps << ","
         << p_found << "," << value << "\n";
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chainline: almost-chain families, extension witnesses and norm bounds"};
  app.require_subcommand(1);

  CliState state;

  CLI::App* build = app.add_subcommand("build", "sample generators and write the family");
  build->add_option("--matrix-csv", state.matrix_csv, "also write the membership matrix");

  CLI::App* verify =
      app.add_subcommand("verify-witness", "check the explicit witness family exactly");
  CLI::App* eta = app.add_subcommand("eta", "sweep the minimal-norm lower bound over depths");
  CLI::App* reduce =
      app.add_subcommand("reduce", "apply the odd-norm reduction and re-check closeness");
  reduce->add_option("--measures", state.measures_file, "measure family JSON input");
  reduce->add_option("--noise-entries", state.noise_entries,
                     "perturbed entries when generating the demo family");
  reduce->add_option("--measure-depth", state.measure_depth,
                     "node depth of the generated demo family");
  CLI::App* lift =
      app.add_subcommand("lift", "falsify or repair chain liftings per budget");
  CLI::App* sweep =
      app.add_subcommand("sweep", "factorial growth: witnesses and norm bound per depth");

  for (CLI::App* cmd : {build, verify, eta, reduce, lift, sweep}) {
    add_config_options(cmd, state);
    if (cmd != build) {
      cmd->add_option("--family", state.family_file, "chain family JSON (else built)");
    }
  }
  eta->add_option("--sweep-step", state.sweep_step, "depth increment of the sweep");
  sweep->add_option("--sweep-step", state.sweep_step, "depth increment of the sweep");

  CLI11_PARSE(app, argc, argv);

  try {
    for (CLI::App* cmd : {build, verify, eta, reduce, lift, sweep}) {
      if (cmd->parsed()) merge_config_file(cmd, state);
    }
    if (build->parsed()) return run_build(state);
    if (verify->parsed()) return run_verify_witness(state);
    if (eta->parsed()) return run_eta(state);
    if (reduce->parsed()) return run_reduce(state);
    if (lift->parsed()) return run_lift(state);
    if (sweep->parsed()) return run_sweep(state);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
