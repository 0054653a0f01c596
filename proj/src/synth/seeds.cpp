// SPDX-License-Identifier: Apache-2.0
#include "ocreval/synth.hpp"

namespace ocreval::synth {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t line_seed(std::uint64_t master, std::string_view text, std::size_t occurrence) {
  return mix64(mix64(master) ^ fnv1a64(text) ^ mix64(0x6f63637572ULL + occurrence));
}

std::uint64_t uppercase_seed(std::uint64_t seed) { return mix64(seed ^ 0x5550504552ULL); }

bool wants_uppercase(std::uint64_t seed, double probability) {
  if (probability <= 0) return false;
  if (probability >= 1) return true;
  const double u = static_cast<double>(mix64(seed ^ 0x4341534555ULL) >> 11) * 0x1.0p-53;
  return u < probability;
}

}  // namespace ocreval::synth
