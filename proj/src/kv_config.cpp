// SPDX-License-Identifier: Apache-2.0
#include "ocreval/kv_config.hpp"

#include <cctype>
#include <charconv>

#include "io.hpp"
#include "ocreval/error.hpp"
#include "ocreval/unicode.hpp"

namespace ocreval {

namespace {

using ordered_json = nlohmann::ordered_json;

class KvParser {
 public:
  KvParser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  ordered_json parse() {
    if (!unicode::is_valid_utf8(text_)) fail("file is not valid UTF-8");
    ordered_json root = ordered_json::object();
    ordered_json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = header(root);
      } else {
        key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(std::string(source_), line_, column(), what);
  }

  std::size_t column() const { return pos_ - line_start_ + 1; }
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }

  char get() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      line_start_ = pos_;
    }
    return c;
  }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) get();
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') get();
    }
  }

  void skip_blank_lines() {
    while (!eof()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r') get();
      if (peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }

  // Whitespace, comments and newlines (inside arrays).
  void skip_all() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') get();
    if (eof()) return;
    if (peek() != '\n') fail(std::string("unexpected '") + peek() + "' after value");
    get();
  }

  std::vector<std::string> dotted_key() {
    std::vector<std::string> parts;
    while (true) {
      skip_spaces();
      parts.push_back(simple_key());
      skip_spaces();
      if (peek() != '.') break;
      get();
    }
    return parts;
  }

  std::string simple_key() {
    if (peek() == '"') return basic_string();
    if (peek() == '\'') return literal_string();
    const std::size_t start = pos_;
    while (!eof()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        get();
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  ordered_json* descend(ordered_json& from, const std::vector<std::string>& path, std::size_t count) {
    ordered_json* node = &from;
    for (std::size_t i = 0; i < count; ++i) {
      ordered_json& next = (*node)[path[i]];
      if (next.is_null()) next = ordered_json::object();
      if (next.is_array() && !next.empty() && next.back().is_object()) {
        node = &next.back();
      } else if (next.is_object()) {
        node = &next;
      } else {
        fail("key '" + path[i] + "' is not a table");
      }
    }
    return node;
  }

  ordered_json* header(ordered_json& root) {
    get();  // '['
    const bool array_of_tables = peek() == '[';
    if (array_of_tables) get();
    const auto path = dotted_key();
    skip_spaces();
    if (peek() != ']') fail("expected ']'");
    get();
    if (array_of_tables) {
      if (peek() != ']') fail("expected ']]'");
      get();
      ordered_json* parent = descend(root, path, path.size() - 1);
      ordered_json& list = (*parent)[path.back()];
      if (list.is_null()) list = ordered_json::array();
      if (!list.is_array()) fail("key '" + path.back() + "' is not an array of tables");
      list.push_back(ordered_json::object());
      return &list.back();
    }
    return descend(root, path, path.size());
  }

  void key_value(ordered_json& table) {
    const auto path = dotted_key();
    skip_spaces();
    if (peek() != '=') fail("expected '='");
    get();
    skip_spaces();
    ordered_json* target = descend(table, path, path.size() - 1);
    if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*target)[path.back()] = value();
  }

  ordered_json value() {
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') return array();
    if (text_.substr(pos_, 4) == "true") {
      for (int i = 0; i < 4; ++i) get();
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      for (int i = 0; i < 5; ++i) get();
      return false;
    }
    return number();
  }

  ordered_json array() {
    get();  // '['
    ordered_json out = ordered_json::array();
    while (true) {
      skip_all();
      if (eof()) fail("unterminated array");
      if (peek() == ']') {
        get();
        return out;
      }
      out.push_back(value());
      skip_all();
      if (peek() == ',') {
        get();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  ordered_json number() {
    const std::size_t start = pos_;
    while (!eof()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' || c == '_') {
        get();
      } else {
        break;
      }
    }
    std::string token;
    for (char c : text_.substr(start, pos_ - start)) {
      if (c != '_') token.push_back(c);
    }
    if (token.empty()) fail("expected a value");
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (*first == '+') ++first;
    const bool is_float = token.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      long long v = 0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec == std::errc{} && ptr == last) return v;
      unsigned long long u = 0;
      auto [uptr, uec] = std::from_chars(first, last, u);
      if (uec == std::errc{} && uptr == last) return u;
    } else {
      double d = 0;
      auto [ptr, ec] = std::from_chars(first, last, d);
      if (ec == std::errc{} && ptr == last) return d;
    }
    fail("invalid value '" + token + "'");
  }

  std::string literal_string() {
    get();  // '\''
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') return out;
      out.push_back(c);
    }
  }

  std::string basic_string() {
    get();  // '"'
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '"') return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (eof()) fail("unterminated escape");
      const char e = get();
      switch (e) {
        case 'b': out.push_back('\b'); break;
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'f': out.push_back('\f'); break;
        case 'r': out.push_back('\r'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'u':
        case 'U': {
          const int digits = e == 'u' ? 4 : 8;
          if (pos_ + digits > text_.size()) fail("truncated unicode escape");
          std::uint32_t code = 0;
          const char* first = text_.data() + pos_;
          auto [ptr, ec] = std::from_chars(first, first + digits, code, 16);
          if (ec != std::errc{} || ptr != first + digits) fail("invalid unicode escape");
          for (int i = 0; i < digits; ++i) get();
          if (code > 0x10FFFF || (code >= 0xD800 && code <= 0xDFFF)) fail("escape is not a scalar value");
          out += unicode::to_utf8(static_cast<char32_t>(code));
          break;
        }
        default:
          fail(std::string("unknown escape \\") + e);
      }
    }
  }

  std::string_view text_;
  std::string_view source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

}  // namespace

nlohmann::ordered_json parse_kv_config(std::string_view text, std::string_view source) {
  return KvParser(text, source).parse();
}

nlohmann::ordered_json load_kv_config(const std::filesystem::path& path) {
  return parse_kv_config(detail::read_file(path), path.string());
}

}  // namespace ocreval
