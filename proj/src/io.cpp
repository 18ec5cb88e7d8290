#include "chainline/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace chainline::io {

namespace {

std::vector<Symbol> parse_symbols(TreeKind kind, const std::string& text) {
  std::vector<Symbol> symbols;
  if (text.empty()) return symbols;
  if (kind == TreeKind::Dyadic) {
    symbols.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("dyadic literal: unexpected character");
      }
      symbols.push_back(c - '0');
    }
    return symbols;
  }
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    symbols.push_back(std::stoi(item));
  }
  return symbols;
}

std::string format_symbols(TreeKind kind, std::span<const Symbol> symbols) {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (kind == TreeKind::Dyadic) {
      out += static_cast<char>('0' + symbols[i]);
    } else {
      if (i > 0) out += ',';
      out += std::to_string(symbols[i]);
    }
  }
  return out;
}

}  // namespace

std::string format_node(const TreeNode& node) {
  return format_symbols(node.kind(), node.symbols());
}

TreeNode parse_node(TreeKind kind, const std::string& text) {
  return TreeNode(kind, parse_symbols(kind, text));
}

std::string format_branch(const Branch& branch) {
  return format_symbols(branch.kind(), branch.prefix()) + "|" +
         format_symbols(branch.kind(), branch.tail_word());
}

Branch parse_branch(TreeKind kind, const std::string& text) {
  const auto bar = text.find('|');
  if (bar == std::string::npos) {
    throw std::invalid_argument("branch literal must contain '|': " + text);
  }
  return Branch(kind, parse_symbols(kind, text.substr(0, bar)),
                parse_symbols(kind, text.substr(bar + 1)));
}

std::string format_cut(const CutPoint& cut) {
  if (cut.is_bottom()) return "BOT";
  if (cut.is_top()) return "TOP";
  if (cut.is_branch()) return format_branch(cut.branch());
  return format_node(cut.node());
}

CutPoint parse_cut(TreeKind kind, const std::string& text) {
  if (text == "BOT") return CutPoint::bottom();
  if (text == "TOP") return CutPoint::top();
  if (text.find('|') != std::string::npos) return CutPoint(parse_branch(kind, text));
  return CutPoint(parse_node(kind, text));
}

nlohmann::json chain_family_to_json(const ChainFamily& family) {
  nlohmann::json j;
  j["kind"] = to_string(family.kind());
  j["depth"] = family.depth();
  nlohmann::json gens = nlohmann::json::array();
  for (const Branch& g : family.generators()) gens.push_back(format_branch(g));
  j["generators"] = std::move(gens);
  if (family.has_overrides()) {
    nlohmann::json overrides = nlohmann::json::array();
    for (std::size_t i = 0; i < family.size(); ++i) {
      const NodeDelta* delta = family.override_for(i);
      if (!delta) continue;
      nlohmann::json added = nlohmann::json::array();
      for (const TreeNode& node : delta->added) added.push_back(format_node(node));
      nlohmann::json removed = nlohmann::json::array();
      for (const TreeNode& node : delta->removed) removed.push_back(format_node(node));
      overrides.push_back({{"generator", format_branch(family.generator(i))},
                           {"added", std::move(added)},
                           {"removed", std::move(removed)}});
    }
    j["overrides"] = std::move(overrides);
  }
  return j;
}

ChainFamily chain_family_from_json(const nlohmann::json& j) {
  const TreeKind kind = tree_kind_from_string(j.at("kind").get<std::string>());
  std::vector<Branch> generators;
  for (const auto& literal : j.at("generators")) {
    generators.push_back(parse_branch(kind, literal.get<std::string>()));
  }
  ChainFamily family(kind, std::move(generators), j.at("depth").get<int>());
  if (j.contains("overrides")) {
    for (const auto& entry : j.at("overrides")) {
      const Branch g = parse_branch(kind, entry.at("generator").get<std::string>());
      std::size_t index = family.size();
      for (std::size_t i = 0; i < family.size(); ++i) {
        if (family.generator(i) == g) {
          index = i;
          break;
        }
      }
      if (index == family.size()) {
        throw std::invalid_argument("chain family: override generator not in family");
      }
      NodeDelta delta;
      for (const auto& node : entry.at("added")) {
        delta.added.push_back(parse_node(kind, node.get<std::string>()));
      }
      for (const auto& node : entry.at("removed")) {
        delta.removed.push_back(parse_node(kind, node.get<std::string>()));
      }
      family.set_override(index, std::move(delta));
    }
  }
  return family;
}

nlohmann::json measure_to_json(const SignedMeasure& measure) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& [cut, weight] : measure.atoms()) {
    atoms.push_back({{"cut", format_cut(cut)}, {"weight", format_rational(weight)}});
  }
  return atoms;
}

SignedMeasure measure_from_json(TreeKind kind, const nlohmann::json& j) {
  std::vector<std::pair<CutPoint, Rational>> atoms;
  for (const auto& atom : j) {
    atoms.emplace_back(parse_cut(kind, atom.at("cut").get<std::string>()),
                       parse_rational(atom.at("weight").get<std::string>()));
  }
  return SignedMeasure(std::move(atoms));
}

nlohmann::json measure_family_to_json(const MeasureFamily& family) {
  nlohmann::json j;
  j["bound"] = format_rational(family.bound);
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& entry : family.entries) {
    entries.push_back(
        {{"node", format_node(entry.node)}, {"measure", measure_to_json(entry.measure)}});
  }
  j["entries"] = std::move(entries);
  return j;
}

MeasureFamily measure_family_from_json(TreeKind kind, const nlohmann::json& j) {
  std::vector<MeasureFamilyEntry> entries;
  for (const auto& entry : j.at("entries")) {
    entries.push_back(
        MeasureFamilyEntry{parse_node(kind, entry.at("node").get<std::string>()),
                           measure_from_json(kind, entry.at("measure"))});
  }
  MeasureFamily family = MeasureFamily::build(std::move(entries));
  if (j.contains("bound")) {
    const Rational declared = parse_rational(j.at("bound").get<std::string>());
    if (declared < family.bound) {
      throw std::invalid_argument("measure family: declared bound below actual variation");
    }
    family.bound = declared;
  }
  return family;
}

nlohmann::json falsification_to_json(const Falsification& certificate,
                                     const ChainFamily& family) {
  return {{"x", format_branch(family.generator(certificate.x_index))},
          {"y", format_branch(family.generator(certificate.y_index))},
          {"sigma", format_node(certificate.sigma)},
          {"m", certificate.m},
          {"budget", certificate.budget}};
}

Falsification falsification_from_json(const ChainFamily& family, const nlohmann::json& j) {
  const Branch x = parse_branch(family.kind(), j.at("x").get<std::string>());
  const Branch y = parse_branch(family.kind(), j.at("y").get<std::string>());
  Falsification certificate;
  certificate.sigma = parse_node(family.kind(), j.at("sigma").get<std::string>());
  certificate.m = j.at("m").get<std::size_t>();
  certificate.budget = j.at("budget").get<int>();
  bool found_x = false;
  bool found_y = false;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family.generator(i) == x) {
      certificate.x_index = i;
      found_x = true;
    }
    if (family.generator(i) == y) {
      certificate.y_index = i;
      found_y = true;
    }
  }
  if (!found_x || !found_y) {
    throw std::invalid_argument("falsification: generators not in family");
  }
  return certificate;
}

nlohmann::json candidate_to_json(const LiftingCandidate& candidate,
                                 const ChainFamily& family) {
  nlohmann::json mods = nlohmann::json::array();
  for (std::size_t i = 0; i < candidate.modifications.size(); ++i) {
    const NodeDelta& delta = candidate.modifications[i];
    if (delta.empty()) continue;
    nlohmann::json added = nlohmann::json::array();
    for (const TreeNode& node : delta.added) added.push_back(format_node(node));
    nlohmann::json removed = nlohmann::json::array();
    for (const TreeNode& node : delta.removed) removed.push_back(format_node(node));
    mods.push_back({{"generator", format_branch(family.generator(i))},
                    {"added", std::move(added)},
                    {"removed", std::move(removed)}});
  }
  return {{"budget", candidate.budget}, {"modifications", std::move(mods)}};
}

LiftingCandidate candidate_from_json(const ChainFamily& family, const nlohmann::json& j) {
  LiftingCandidate candidate;
  candidate.budget = j.at("budget").get<int>();
  candidate.modifications.resize(family.size());
  for (const auto& mod : j.at("modifications")) {
    const Branch g = parse_branch(family.kind(), mod.at("generator").get<std::string>());
    std::size_t index = family.size();
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (family.generator(i) == g) {
        index = i;
        break;
      }
    }
    if (index == family.size()) {
      throw std::invalid_argument("candidate: generator not in family");
    }
    for (const auto& node : mod.at("added")) {
      candidate.modifications[index].added.push_back(
          parse_node(family.kind(), node.get<std::string>()));
    }
    for (const auto& node : mod.at("removed")) {
      candidate.modifications[index].removed.push_back(
          parse_node(family.kind(), node.get<std::string>()));
    }
  }
  return candidate;
}

Tube tube_from_json(const nlohmann::json& j) {
  Tube tube;
  tube.eps = j.at("eps").get<double>();
  for (const auto& t : j.at("targets")) tube.targets.push_back(t.get<double>());
  return tube;
}

nlohmann::json tube_to_json(const Tube& tube) {
  return {{"targets", tube.targets}, {"eps", tube.eps}};
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void save_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

namespace {

// Preorder walk = lexicographic order on the truncated node set: a node
// precedes its extensions and subtrees follow the symbol order.
void visit_lex(TreeKind kind, std::vector<Symbol>& symbols, int depth,
               const std::function<void(const TreeNode&)>& fn) {
  fn(TreeNode(kind, symbols));
  if (static_cast<int>(symbols.size()) == depth) return;
  const Symbol top = max_symbol_at(kind, symbols.size());
  for (Symbol s = 0; s <= top; ++s) {
    symbols.push_back(s);
    visit_lex(kind, symbols, depth, fn);
    symbols.pop_back();
  }
}

}  // namespace

void write_membership_matrix_csv(const ChainFamily& family, std::ostream& out,
                                 const std::string& config_hash) {
  unsigned long long rows = 0;
  for (int level = 0; level <= family.depth(); ++level) {
    rows += level_count(family.kind(), level);
    if (rows > kDefaultNodeBudget) {
      throw BudgetError("membership matrix: truncated universe too large for CSV export");
    }
  }
  out << "# chainline membership-matrix v1 config=" << config_hash << "\n";
  out << "node";
  for (const Branch& g : family.generators()) out << "," << format_branch(g);
  out << "\n";
  std::vector<Symbol> symbols;
  visit_lex(family.kind(), symbols, family.depth(), [&](const TreeNode& node) {
    out << format_node(node);
    for (std::size_t i = 0; i < family.size(); ++i) {
      out << "," << (family.member(node, i) ? 1 : 0);
    }
    out << "\n";
  });
}

void write_closeness_csv(const ClosenessReport& report, const ChainFamily& family,
                         std::ostream& out, const std::string& config_hash) {
  out << "# chainline closeness-report v1 config=" << config_hash << "\n";
  out << "node,generator,deviation,flagged\n";
  for (const ClosenessViolation& violation : report.violations) {
    out << format_node(violation.node) << ",";
    if (violation.generator_index) {
      out << format_branch(family.generator(*violation.generator_index));
    } else {
      out << "TOTAL";
    }
    out << "," << format_rational(violation.deviation) << ","
        << (violation.beyond_horizon ? 1 : 0) << "\n";
  }
}

std::string fnv1a_hash_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace chainline::io
