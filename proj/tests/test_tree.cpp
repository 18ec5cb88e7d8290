#include "doctest.h"

#include <algorithm>
#include <vector>

#include "chainline/tree.hpp"

using namespace chainline;

namespace {

Branch dyadic(std::vector<Symbol> prefix, std::vector<Symbol> tail) {
  return Branch(TreeKind::Dyadic, std::move(prefix), std::move(tail));
}

TreeNode dnode(std::vector<Symbol> symbols) {
  return TreeNode(TreeKind::Dyadic, std::move(symbols));
}

}  // namespace

TEST_CASE("lex order on nodes and branches") {
  const Branch x = dyadic({}, {1, 0});  // 101010...
  CHECK(lex_compare(dnode({1, 0}), x) == std::strong_ordering::less);  // initial segment
  CHECK(lex_compare(x, dnode({1, 0})) == std::strong_ordering::greater);

  CHECK(lex_compare(dnode({0, 1}), dnode({1})) == std::strong_ordering::less);

  const Branch y = dyadic({1, 0}, {1});  // 10111...
  CHECK(lex_compare(dnode({1, 1}), y) == std::strong_ordering::greater);
  CHECK(lex_compare(y, dnode({1, 1})) == std::strong_ordering::less);

  const Branch f = Branch(TreeKind::Factorial, {0, 1}, {0});
  CHECK_THROWS_AS((void)lex_compare(dnode({1}), f), KindMismatchError);
}

TEST_CASE("branch canonicalization folds tails and absorbs prefixes") {
  CHECK(dyadic({0, 1}, {0, 1}) == dyadic({}, {0, 1}));
  CHECK(dyadic({1}, {0, 1}) == dyadic({}, {1, 0}));
  CHECK(dyadic({}, {1, 0, 1, 0}) == dyadic({}, {1, 0}));
  CHECK(dyadic({1, 0}, {1, 0}) == dyadic({}, {1, 0}));
  CHECK(dyadic({}, {1, 1, 1}) == dyadic({}, {1}));
  CHECK(dyadic({}, {1, 0}) != dyadic({}, {0, 1}));

  // Same symbol sequence through different representations compares equal.
  CHECK(lex_compare(dyadic({1, 0, 1}, {0, 1}), dyadic({}, {1, 0})) ==
        std::strong_ordering::equal);
}

TEST_CASE("branch validation") {
  CHECK_THROWS_AS(dyadic({2}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(dyadic({}, std::vector<Symbol>{}), std::invalid_argument);
  // Factorial: symbol at position i must stay <= i, also inside the tail.
  CHECK_THROWS_AS(Branch(TreeKind::Factorial, {1}, {0}), std::invalid_argument);
  CHECK_NOTHROW(Branch(TreeKind::Factorial, {0, 1, 2}, {0, 1}));
  CHECK_THROWS_AS(Branch(TreeKind::Factorial, {0}, {2}), std::invalid_argument);
}

TEST_CASE("enumerate_level counts and order") {
  CHECK(enumerate_level(TreeKind::Dyadic, 3).size() == 8);
  CHECK(enumerate_level(TreeKind::Factorial, 3).size() == 6);  // 1 * 2 * 3
  const auto roots = enumerate_level(TreeKind::Factorial, 0);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].empty());

  for (TreeKind kind : {TreeKind::Dyadic, TreeKind::Factorial}) {
    const auto level = enumerate_level(kind, 4);
    for (std::size_t i = 0; i + 1 < level.size(); ++i) {
      CHECK(lex_compare(level[i], level[i + 1]) == std::strong_ordering::less);
    }
  }

  CHECK_THROWS_AS(enumerate_level(TreeKind::Dyadic, 40, 1 << 20), BudgetError);
}

TEST_CASE("for_each_node streams every level once") {
  std::size_t count = 0;
  for_each_node(TreeKind::Factorial, 0, 4, [&](const TreeNode& node) {
    CHECK(node.length() <= 4);
    ++count;
  });
  CHECK(count == 1 + 1 + 2 + 6 + 24);
}

TEST_CASE("sample_branch determinism and policies") {
  const TailPolicy policy{8, {1, 0}};
  Rng a(42);
  Rng b(42);
  const Branch first = sample_branch(TreeKind::Dyadic, a, policy);
  const Branch second = sample_branch(TreeKind::Dyadic, b, policy);
  CHECK(first == second);
  // Tail echoes the policy word: eventually strictly alternating.
  for (std::size_t i = 10; i < 30; ++i) CHECK(first.at(i) != first.at(i + 1));

  Rng c(7);
  const Branch f = sample_branch(TreeKind::Factorial, c, TailPolicy{30, {0}});
  for (std::size_t i = 0; i < 60; ++i) {
    CHECK(f.at(i) >= 0);
    CHECK(f.at(i) <= static_cast<Symbol>(i));
  }

  Rng d(9);
  CHECK_THROWS_AS(sample_branch(TreeKind::Dyadic, d, TailPolicy{4, {1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_branch(TreeKind::Factorial, d, TailPolicy{1, {2}}),
                  std::invalid_argument);
}

TEST_CASE("lex order is total on random samples") {
  Rng rng(123);
  for (TreeKind kind : {TreeKind::Dyadic, TreeKind::Factorial}) {
    std::vector<TreeNode> nodes;
    std::vector<Branch> branches;
    for (int i = 0; i < 25; ++i) {
      std::vector<Symbol> symbols;
      const auto len = rng.bounded(7);
      for (std::size_t p = 0; p < len; ++p) {
        symbols.push_back(static_cast<Symbol>(rng.bounded(max_symbol_at(kind, p) + 1)));
      }
      nodes.emplace_back(kind, symbols);
      TailPolicy policy{3 + rng.bounded(4),
                        kind == TreeKind::Dyadic ? std::vector<Symbol>{1, 0}
                                                 : std::vector<Symbol>{0}};
      branches.push_back(sample_branch(kind, rng, policy));
    }
    const std::size_t total = nodes.size() + branches.size();
    auto compare = [&](std::size_t i, std::size_t j) {
      const bool in = i < nodes.size();
      const bool jn = j < nodes.size();
      if (in && jn) return lex_compare(nodes[i], nodes[j]);
      if (in) return lex_compare(nodes[i], branches[j - nodes.size()]);
      if (jn) return lex_compare(branches[i - nodes.size()], nodes[j]);
      return lex_compare(branches[i - nodes.size()], branches[j - nodes.size()]);
    };
    for (std::size_t i = 0; i < total; ++i) {
      for (std::size_t j = 0; j < total; ++j) {
        const auto ij = compare(i, j);
        const auto ji = compare(j, i);
        CHECK((ij == std::strong_ordering::equal) == (ji == std::strong_ordering::equal));
        CHECK((ij == std::strong_ordering::less) == (ji == std::strong_ordering::greater));
        for (std::size_t k = 0; k < total; ++k) {
          if (ij != std::strong_ordering::greater &&
              compare(j, k) != std::strong_ordering::greater) {
            CHECK(compare(i, k) != std::strong_ordering::greater);
          }
        }
      }
    }
  }
}

TEST_CASE("first_difference and divergence") {
  const Branch x = dyadic({}, {1, 0});
  CHECK(first_difference(dnode({1, 0, 1}), x) == kNoDifference);
  CHECK(first_difference(dnode({1, 1}), x) == 1);
  const Branch y = dyadic({1, 1}, {1, 0});
  CHECK(divergence_index(x, y) == 1);
  CHECK_THROWS_AS(divergence_index(x, dyadic({1}, {0, 1})), std::invalid_argument);
}
