#include "chainline/tree.hpp"

#include <algorithm>
#include <numeric>

namespace chainline {

namespace {

void check_same_kind(TreeKind a, TreeKind b) {
  if (a != b) throw KindMismatchError("lex_compare: mixed tree kinds");
}

void validate_symbol(TreeKind kind, std::size_t index, Symbol s) {
  if (s < 0 || s > max_symbol_at(kind, index)) {
    throw std::invalid_argument("symbol " + std::to_string(s) + " out of range at index " +
                                std::to_string(index));
  }
}

// Smallest p dividing |word| with word[i] == word[i % p]; the infinite
// repetition of `word` has exactly this minimal period.
std::size_t minimal_period(const std::vector<Symbol>& word) {
  const std::size_t n = word.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = word[i] == word[i % p];
    if (ok) return p;
  }
  return n;
}

}  // namespace

std::string to_string(TreeKind kind) {
  return kind == TreeKind::Dyadic ? "dyadic" : "factorial";
}

TreeKind tree_kind_from_string(const std::string& name) {
  if (name == "dyadic") return TreeKind::Dyadic;
  if (name == "factorial") return TreeKind::Factorial;
  throw std::invalid_argument("unknown tree kind: " + name);
}

TreeNode::TreeNode(TreeKind kind, std::vector<Symbol> symbols)
    : kind_(kind), symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) validate_symbol(kind_, i, symbols_[i]);
}

TreeNode TreeNode::prefix(std::size_t length) const {
  if (length > symbols_.size()) {
    throw std::invalid_argument("TreeNode::prefix: length exceeds node length");
  }
  return TreeNode(kind_, std::vector<Symbol>(symbols_.begin(),
                                             symbols_.begin() + static_cast<long>(length)));
}

TreeNode TreeNode::child(Symbol next) const {
  std::vector<Symbol> extended = symbols_;
  extended.push_back(next);
  return TreeNode(kind_, std::move(extended));
}

Branch::Branch(TreeKind kind, std::vector<Symbol> prefix, std::vector<Symbol> tail_word)
    : kind_(kind), prefix_(std::move(prefix)), tail_(std::move(tail_word)) {
  if (tail_.empty()) throw std::invalid_argument("Branch: empty tail word");
  canonicalize();
  validate();
}

void Branch::canonicalize() {
  const std::size_t period = minimal_period(tail_);
  tail_.resize(period);
  // Absorb a periodic overhang of the prefix: while the last prefix symbol
  // matches the tail rotated right by one, fold it into the tail.
  while (!prefix_.empty() && prefix_.back() == tail_.back()) {
    std::rotate(tail_.rbegin(), tail_.rbegin() + 1, tail_.rend());
    prefix_.pop_back();
  }
}

void Branch::validate() const {
  for (std::size_t i = 0; i < prefix_.size(); ++i) validate_symbol(kind_, i, prefix_[i]);
  for (std::size_t j = 0; j < tail_.size(); ++j) {
    // tail_[j] first occurs at position prefix length + j, its tightest bound.
    validate_symbol(kind_, prefix_.size() + j, tail_[j]);
  }
}

TreeNode Branch::prefix_node(std::size_t length) const {
  std::vector<Symbol> symbols(length);
  for (std::size_t i = 0; i < length; ++i) symbols[i] = at(i);
  return TreeNode(kind_, std::move(symbols));
}

bool Branch::tail_contains(Symbol s) const {
  return std::find(tail_.begin(), tail_.end(), s) != tail_.end();
}

std::size_t Branch::comparison_bound(const Branch& other) const {
  const std::size_t start = std::max(prefix_.size(), other.prefix_.size());
  return start + std::lcm(tail_.size(), other.tail_.size());
}

std::size_t first_difference(const TreeNode& node, const Branch& branch) {
  check_same_kind(node.kind(), branch.kind());
  for (std::size_t i = 0; i < node.length(); ++i) {
    if (node.at(i) != branch.at(i)) return i;
  }
  return kNoDifference;
}

std::size_t divergence_index(const Branch& a, const Branch& b) {
  check_same_kind(a.kind(), b.kind());
  const std::size_t bound = a.comparison_bound(b);
  for (std::size_t i = 0; i < bound; ++i) {
    if (a.at(i) != b.at(i)) return i;
  }
  throw std::invalid_argument("divergence_index: branches are equal");
}

std::strong_ordering lex_compare(const TreeNode& a, const TreeNode& b) {
  check_same_kind(a.kind(), b.kind());
  const auto sa = a.symbols();
  const auto sb = b.symbols();
  return std::lexicographical_compare_three_way(sa.begin(), sa.end(), sb.begin(), sb.end());
}

std::strong_ordering lex_compare(const TreeNode& a, const Branch& b) {
  const std::size_t i = first_difference(a, b);
  if (i == kNoDifference) return std::strong_ordering::less;  // initial segment
  return a.at(i) < b.at(i) ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::strong_ordering lex_compare(const Branch& a, const TreeNode& b) {
  const auto flipped = lex_compare(b, a);
  if (flipped == std::strong_ordering::less) return std::strong_ordering::greater;
  return std::strong_ordering::less;
}

std::strong_ordering lex_compare(const Branch& a, const Branch& b) {
  check_same_kind(a.kind(), b.kind());
  const std::size_t bound = a.comparison_bound(b);
  for (std::size_t i = 0; i < bound; ++i) {
    const Symbol x = a.at(i);
    const Symbol y = b.at(i);
    if (x != y) return x < y ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

unsigned long long level_count(TreeKind kind, int level) {
  constexpr auto kMax = std::numeric_limits<unsigned long long>::max();
  unsigned long long count = 1;
  for (int i = 0; i < level; ++i) {
    const auto width = static_cast<unsigned long long>(max_symbol_at(kind, i)) + 1;
    if (count > kMax / width) return kMax;
    count *= width;
  }
  return count;
}

std::vector<TreeNode> enumerate_level(TreeKind kind, int level, std::size_t budget) {
  std::vector<TreeNode> nodes;
  const auto count = level_count(kind, level);
  if (count > budget) {
    throw BudgetError("enumerate_level: level " + std::to_string(level) + " has " +
                      std::to_string(count) + " nodes, budget " + std::to_string(budget));
  }
  nodes.reserve(count);
  for_each_node(kind, level, level, [&](const TreeNode& node) { nodes.push_back(node); },
                budget);
  return nodes;
}

void for_each_node(TreeKind kind, int min_level, int max_level,
                   const std::function<void(const TreeNode&)>& fn, std::size_t budget) {
  if (min_level < 0 || max_level < min_level) return;
  unsigned long long total = 0;
  for (int level = min_level; level <= max_level; ++level) {
    const auto count = level_count(kind, level);
    if (count > budget - std::min<unsigned long long>(total, budget)) {
      throw BudgetError("for_each_node: node budget " + std::to_string(budget) + " exceeded");
    }
    total += count;
  }
  std::vector<Symbol> symbols;
  for (int level = min_level; level <= max_level; ++level) {
    symbols.assign(static_cast<std::size_t>(level), 0);
    for (;;) {
      fn(TreeNode(kind, symbols));
      // Odometer step: lexicographic successor of the same length.
      std::size_t i = symbols.size();
      while (i > 0 && symbols[i - 1] == max_symbol_at(kind, i - 1)) --i;
      if (i == 0) break;
      ++symbols[i - 1];
      std::fill(symbols.begin() + static_cast<long>(i), symbols.end(), 0);
    }
  }
}

Branch sample_branch(TreeKind kind, Rng& rng, const TailPolicy& policy) {
  if (policy.tail_word.empty()) {
    throw std::invalid_argument("sample_branch: policy has empty tail word");
  }
  if (kind == TreeKind::Dyadic) {
    const bool has0 = std::find(policy.tail_word.begin(), policy.tail_word.end(), 0) !=
                      policy.tail_word.end();
    const bool has1 = std::find(policy.tail_word.begin(), policy.tail_word.end(), 1) !=
                      policy.tail_word.end();
    if (!has0 || !has1) {
      throw std::invalid_argument(
          "sample_branch: dyadic tail word must contain both symbols");
    }
  }
  for (std::size_t j = 0; j < policy.tail_word.size(); ++j) {
    const Symbol s = policy.tail_word[j];
    if (s < 0 || s > max_symbol_at(kind, policy.prefix_length + j)) {
      throw std::invalid_argument("sample_branch: tail word invalid at its position");
    }
  }
  std::vector<Symbol> prefix(policy.prefix_length);
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    prefix[i] = static_cast<Symbol>(
        rng.bounded(static_cast<std::uint64_t>(max_symbol_at(kind, i)) + 1));
  }
  return Branch(kind, std::move(prefix), policy.tail_word);
}

std::size_t hash_value(const TreeNode& node) {
  std::size_t h = 0xcbf29ce484222325ULL ^ static_cast<std::size_t>(node.kind());
  for (Symbol s : node.symbols()) {
    h ^= static_cast<std::size_t>(s) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace chainline
