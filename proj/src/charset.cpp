// SPDX-License-Identifier: Apache-2.0
#include <filesystem>

#include "io.hpp"
#include "ocreval/error.hpp"
#include "ocreval/kv_config.hpp"
#include "ocreval/metrics.hpp"
#include "ocreval/unicode.hpp"

namespace fs = std::filesystem;

namespace ocreval {

CharacterSet CharacterSet::make(std::string name, std::string_view utf8_chars) {
  CharacterSet cs;
  cs.name = std::move(name);
  // A decomposed sequence would otherwise slip in as separate, individually NFC scalars.
  if (!unicode::is_nfc(utf8_chars)) throw DataError("character set '" + cs.name + "' is not NFC");
  for (char32_t c : unicode::to_scalars(utf8_chars)) {
    const std::string encoded = unicode::to_utf8(c);
    if (unicode::nfc(encoded) != encoded) {
      throw DataError("character set '" + cs.name + "': " + encoded + " is not NFC");
    }
    cs.chars.insert(c);
  }
  if (cs.chars.empty()) throw DataError("character set '" + cs.name + "' is empty");
  return cs;
}

const std::map<std::string, CharacterSet>& default_character_sets() {
  static const std::map<std::string, CharacterSet> sets = [] {
    std::map<std::string, CharacterSet> out;
    auto add = [&](const char* name, std::string_view chars) {
      out.emplace(name, CharacterSet::make(name, chars));
    };
    add("sme-special", "áÁčČđĐŋŊšŠŧŦžŽ");
    add("sma-special", "ïÏäÄöÖ");
    add("smj-special", "áÁäÄŋŊ");
    add("smn-special", "áÁâÂäÄčČđĐŋŊšŠžŽ");
    // Union of the letters most often misrecognized across the four orthographies.
    add("all-sami-special", "áÁâčČđïšŠžŋä");
    return out;
  }();
  return sets;
}

std::vector<CharacterSet> parse_character_sets(std::string_view text, std::string_view source) {
  const auto doc = parse_kv_config(text, source);
  std::vector<CharacterSet> sets;
  for (const auto& [name, value] : doc.items()) {
    if (!value.is_string()) {
      throw DataError(std::string(source) + ": character set '" + name + "' must be a string");
    }
    sets.push_back(CharacterSet::make(name, value.get<std::string>()));
  }
  return sets;
}

std::vector<CharacterSet> load_character_sets(const fs::path& path) {
  return parse_character_sets(detail::read_file(path), path.string());
}

CharacterSet resolve_character_set(std::string_view spec) {
  const auto& defaults = default_character_sets();
  if (auto it = defaults.find(std::string(spec)); it != defaults.end()) return it->second;

  std::string file(spec);
  std::string name;
  if (!fs::exists(file)) {
    const auto hash = spec.rfind('#');
    if (hash != std::string_view::npos) {
      file = std::string(spec.substr(0, hash));
      name = std::string(spec.substr(hash + 1));
    }
  }
  if (!fs::is_regular_file(file)) throw DataError("unknown character set: " + std::string(spec));
  const auto sets = load_character_sets(file);
  if (name.empty()) {
    if (sets.size() == 1) return sets.front();
    throw DataError(file + " defines " + std::to_string(sets.size()) +
                    " character sets; select one with " + file + "#<name>");
  }
  for (const auto& cs : sets) {
    if (cs.name == name) return cs;
  }
  throw DataError("no character set '" + name + "' in " + file);
}

}  // namespace ocreval
