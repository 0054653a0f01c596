// SPDX-License-Identifier: Apache-2.0
#pragma once

// Unit-cost Levenshtein distance and alignment over arbitrary random-access
// sequences (scalar strings for CER, token vectors for WER).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ranges>
#include <vector>

namespace ocreval {

enum class EditKind : std::uint8_t { Match, Substitute, Delete, Insert };

template <typename A, typename B>
concept ComparableSequences =
    std::ranges::random_access_range<A> && std::ranges::random_access_range<B> &&
    std::ranges::sized_range<A> && std::ranges::sized_range<B> &&
    std::equality_comparable_with<std::ranges::range_reference_t<A>,
                                  std::ranges::range_reference_t<B>> &&
    // UTF-8 byte strings go through the scalar-level overload in metrics.hpp.
    !std::same_as<std::ranges::range_value_t<A>, char> && !std::same_as<std::ranges::range_value_t<B>, char>;

/// Minimal number of substitutions, insertions and deletions turning `a` into `b`.
/// O(|a|·|b|) time, O(min(|a|,|b|)) memory.
template <typename A, typename B>
  requires ComparableSequences<A, B>
std::size_t edit_distance(const A& a, const B& b) {
  const auto n = std::ranges::size(a);
  const auto m = std::ranges::size(b);
  if (n < m) return edit_distance(b, a);
  if (m == 0) return n;

  auto ai = std::ranges::begin(a);
  auto bi = std::ranges::begin(b);
  std::vector<std::size_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (ai[i - 1] == bi[j - 1] ? 0 : 1);
      row[j] = std::min({sub, up + 1, row[j - 1] + 1});
      diag = up;
    }
  }
  return row[m];
}

/// Optimal edit script from `ref` to `hyp`. The traceback starts at the end of
/// both sequences and, at each cell, prefers the diagonal (Match/Substitute),
/// then Delete (consume ref), then Insert (consume hyp). The result is in
/// forward order.
template <typename A, typename B>
  requires ComparableSequences<A, B>
std::vector<EditKind> edit_script(const A& ref, const B& hyp) {
  const auto n = std::ranges::size(ref);
  const auto m = std::ranges::size(hyp);
  auto ri = std::ranges::begin(ref);
  auto hi = std::ranges::begin(hyp);

  const std::size_t width = m + 1;
  std::vector<std::uint32_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return cost[i * width + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t sub = at(i - 1, j - 1) + (ri[i - 1] == hi[j - 1] ? 0u : 1u);
      at(i, j) = std::min({sub, at(i - 1, j) + 1u, at(i, j - 1) + 1u});
    }
  }

  std::vector<EditKind> script;
  script.reserve(std::max(n, m));
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ri[i - 1] == hi[j - 1];
      if (at(i - 1, j - 1) + (same ? 0u : 1u) == at(i, j)) {
        script.push_back(same ? EditKind::Match : EditKind::Substitute);
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i - 1, j) + 1u == at(i, j)) {
      script.push_back(EditKind::Delete);
      --i;
    } else {
      script.push_back(EditKind::Insert);
      --j;
    }
  }
  std::ranges::reverse(script);
  return script;
}

}  // namespace ocreval
