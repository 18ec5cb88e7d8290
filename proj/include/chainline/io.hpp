#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "chainline/eta.hpp"
#include "chainline/lifting.hpp"
#include "chainline/reduction.hpp"

namespace chainline::io {

// Node literals: bare bits for the dyadic kind ("101", "" for the root),
// comma-separated decimals for the factorial kind ("0,1,2").
std::string format_node(const TreeNode& node);
TreeNode parse_node(TreeKind kind, const std::string& text);

// Branch literals: prefix|tailword with the same symbol conventions,
// e.g. "10|10" (dyadic), "0,1,0|0" (factorial).
std::string format_branch(const Branch& branch);
Branch parse_branch(TreeKind kind, const std::string& text);

// Cut literals: "BOT", "TOP", a branch literal (contains '|') or a node
// literal.
std::string format_cut(const CutPoint& cut);
CutPoint parse_cut(TreeKind kind, const std::string& text);

nlohmann::json chain_family_to_json(const ChainFamily& family);
ChainFamily chain_family_from_json(const nlohmann::json& j);

nlohmann::json measure_to_json(const SignedMeasure& measure);
SignedMeasure measure_from_json(TreeKind kind, const nlohmann::json& j);

nlohmann::json measure_family_to_json(const MeasureFamily& family);
MeasureFamily measure_family_from_json(TreeKind kind, const nlohmann::json& j);

nlohmann::json falsification_to_json(const Falsification& certificate,
                                     const ChainFamily& family);
Falsification falsification_from_json(const ChainFamily& family, const nlohmann::json& j);

nlohmann::json candidate_to_json(const LiftingCandidate& candidate,
                                 const ChainFamily& family);
LiftingCandidate candidate_from_json(const ChainFamily& family, const nlohmann::json& j);

Tube tube_from_json(const nlohmann::json& j);
nlohmann::json tube_to_json(const Tube& tube);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

// CSV emitters. Every file starts with a comment line carrying the config
// hash so results can be traced back to the run that produced them.
void write_membership_matrix_csv(const ChainFamily& family, std::ostream& out,
                                 const std::string& config_hash);
void write_closeness_csv(const ClosenessReport& report, const ChainFamily& family,
                         std::ostream& out, const std::string& config_hash);

std::string fnv1a_hash_hex(const std::string& text);

}  // namespace chainline::io
