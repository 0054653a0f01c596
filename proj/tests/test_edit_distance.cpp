// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <map>

#include "ocreval/edit_distance.hpp"
#include "ocreval/metrics.hpp"
#include "support/generators.hpp"

using ocreval::EditKind;

namespace {

// Memoized recursion straight from the recurrence; shares no code with the
// two-row DP under test.
std::size_t recursive_distance(const std::u32string& a, const std::u32string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  auto go = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    const std::size_t r = std::min({self(self, i - 1, j) + 1, self(self, i, j - 1) + 1,
                                    self(self, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    memo[{i, j}] = r;
    return r;
  };
  return go(go, a.size(), b.size());
}

}  // namespace

TEST(EditDistance, Examples) {
  EXPECT_EQ(ocreval::edit_distance("", "abc"), 3u);
  EXPECT_EQ(ocreval::edit_distance("kitten", "sitting"), 3u);
  EXPECT_EQ(ocreval::edit_distance("boađe", "boađe"), 0u);
  EXPECT_EQ(ocreval::edit_distance("abc", ""), 3u);
  // Scalars, not bytes: đ vs d is one substitution.
  EXPECT_EQ(ocreval::edit_distance("boađe", "boade"), 1u);
}

TEST(EditDistance, WorksOnTokenSequences) {
  const std::vector<std::string> a{"hello", "world"}, b{"hello", "word", "x"};
  EXPECT_EQ(ocreval::edit_distance(a, b), 2u);
}

TEST(EditDistance, ScriptPrefersDiagonalThenDelete) {
  using V = std::vector<EditKind>;
  EXPECT_EQ(ocreval::edit_script(std::u32string(U"ab"), std::u32string(U"b")),
            (V{EditKind::Delete, EditKind::Match}));
  EXPECT_EQ(ocreval::edit_script(std::u32string(U"áå"), std::u32string(U"åa")),
            (V{EditKind::Substitute, EditKind::Substitute}));
  EXPECT_EQ(ocreval::edit_script(std::u32string(U""), std::u32string(U"xy")),
            (V{EditKind::Insert, EditKind::Insert}));
}

TEST(EditDistanceProperty, MatchesRecursiveOracle) {
  testgen::Gen g(0x5eed01);
  for (int n = 0; n < 2000; ++n) {
    const auto a = g.scalars(12);
    const auto b = g.coin() ? g.perturb(a, 4) : g.scalars(12);
    ASSERT_EQ(ocreval::edit_distance(a, b), recursive_distance(a, b))
        << ocreval::unicode::to_utf8(a) << " | " << ocreval::unicode::to_utf8(b);
  }
}

TEST(EditDistanceProperty, MetricAxioms) {
  testgen::Gen g(0x5eed02);
  for (int n = 0; n < 500; ++n) {
    const auto a = g.scalars(15), b = g.scalars(15), c = g.scalars(15);
    const auto ab = ocreval::edit_distance(a, b);
    EXPECT_EQ(ab, ocreval::edit_distance(b, a));
    EXPECT_LE(ab, std::max(a.size(), b.size()));
    EXPECT_GE(ab, a.size() > b.size() ? a.size() - b.size() : b.size() - a.size());
    EXPECT_LE(ocreval::edit_distance(a, c), ab + ocreval::edit_distance(b, c));
    EXPECT_EQ(ocreval::edit_distance(a, a), 0u);
  }
}

TEST(EditDistanceProperty, ScriptCostEqualsDistance) {
  testgen::Gen g(0x5eed03);
  for (int n = 0; n < 1000; ++n) {
    const auto a = g.scalars(20);
    const auto b = g.perturb(a, 6);
    const auto script = ocreval::edit_script(a, b);
    std::size_t cost = 0, ref_used = 0, hyp_used = 0;
    for (EditKind k : script) {
      cost += k != EditKind::Match;
      ref_used += k != EditKind::Insert;
      hyp_used += k != EditKind::Delete;
    }
    ASSERT_EQ(cost, ocreval::edit_distance(a, b));
    ASSERT_EQ(ref_used, a.size());
    ASSERT_EQ(hyp_used, b.size());
  }
}
