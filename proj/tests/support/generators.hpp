// SPDX-License-Identifier: Apache-2.0
// Small random generators for property tests. Seeds are fixed so failures
// reproduce; the failing case is printed by the caller.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ocreval/unicode.hpp"

namespace testgen {

inline const std::u32string& sami_alphabet() {
  static const std::u32string a = U"abcdeghijklmnoprstuvz ÁáČčĐđŊŋŠšŦŧŽžâïåäöA";
  return a;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  std::u32string scalars(std::size_t max_len, const std::u32string& alphabet = sami_alphabet()) {
    std::u32string s(size(0, max_len), U' ');
    for (auto& c : s) c = alphabet[size(0, alphabet.size() - 1)];
    return s;
  }
  std::string text(std::size_t max_len, const std::u32string& alphabet = sami_alphabet()) {
    return ocreval::unicode::to_utf8(scalars(max_len, alphabet));
  }
  // A copy of `s` with a few random edits, so pairs are usually similar.
  std::u32string perturb(std::u32string s, std::size_t max_edits,
                         const std::u32string& alphabet = sami_alphabet()) {
    const std::size_t edits = size(0, max_edits);
    for (std::size_t k = 0; k < edits; ++k) {
      const std::size_t op = size(0, 2);
      const char32_t c = alphabet[size(0, alphabet.size() - 1)];
      if (op == 0 || s.empty()) {
        s.insert(s.begin() + static_cast<long>(size(0, s.size())), c);
      } else if (op == 1) {
        s.erase(s.begin() + static_cast<long>(size(0, s.size() - 1)));
      } else {
        s[size(0, s.size() - 1)] = c;
      }
    }
    return s;
  }
  std::u32string subset(const std::u32string& alphabet) {
    std::u32string out;
    for (char32_t c : alphabet) {
      if (coin(0.3)) out.push_back(c);
    }
    if (out.empty()) out.push_back(alphabet[size(0, alphabet.size() - 1)]);
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testgen
