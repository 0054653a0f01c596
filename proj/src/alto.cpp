// SPDX-License-Identifier: Apache-2.0
#include <expat.h>

#include <charconv>
#include <memory>

#include "io.hpp"
#include "ocreval/corpus.hpp"
#include "ocreval/error.hpp"
#include "ocreval/unicode.hpp"

namespace fs = std::filesystem;

namespace ocreval {

namespace {

// Element name without a namespace prefix ("alto:TextLine" -> "TextLine").
std::string_view local_name(std::string_view name) {
  const auto colon = name.find(':');
  return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

std::optional<std::string> attribute(const XML_Char** attrs, std::string_view name) {
  for (; attrs && attrs[0]; attrs += 2) {
    if (local_name(attrs[0]) == name) return std::string(attrs[1]);
  }
  return std::nullopt;
}

std::optional<double> number(const std::optional<std::string>& raw) {
  if (!raw) return std::nullopt;
  const std::string s = unicode::trim(*raw);
  double value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Streaming handler: only Page, TextLine, String and HYP carry information.
struct Handler {
  const AltoOptions& options;
  Diagnostics* diagnostics;
  std::string source;
  std::vector<TranscribedLine> lines{};

  std::size_t page_count = 0;
  std::optional<std::string> page_id{};
  std::size_t page_line_index = 0;
  std::size_t implicit_index = 0;

  struct OpenLine {
    std::string id_attr;
    std::string text;
    std::size_t strings = 0;
    std::optional<double> x, y, w, h;
  };
  std::optional<OpenLine> line{};

  void warn(const std::string& message) {
    if (diagnostics) diagnostics->warn(source + ": " + message);
  }

  void start(std::string_view name, const XML_Char** attrs) {
    if (name == "Page") {
      page_id = source + "/" + attribute(attrs, "ID").value_or("page" + std::to_string(page_count));
      ++page_count;
      page_line_index = 0;
    } else if (name == "TextLine") {
      std::size_t& index = page_id ? page_line_index : implicit_index;
      line = OpenLine{attribute(attrs, "ID").value_or("line" + std::to_string(index)), {}, 0,
                      number(attribute(attrs, "HPOS")), number(attribute(attrs, "VPOS")),
                      number(attribute(attrs, "WIDTH")), number(attribute(attrs, "HEIGHT"))};
    } else if (line && name == "String") {
      const auto content = attribute(attrs, "CONTENT");
      if (!content) {
        warn("String without CONTENT ignored");
        return;
      }
      if (line->strings > 0) line->text += ' ';
      line->text += *content;
      ++line->strings;
    } else if (line && name == "HYP" && options.keep_hyphenation) {
      if (auto content = attribute(attrs, "CONTENT")) line->text += *content;
    }
  }

  void end(std::string_view name) {
    if (name == "Page") {
      page_id.reset();
    } else if (name == "TextLine" && line) {
      finish_line(*line);
      line.reset();
    }
  }

  void finish_line(const OpenLine& open) {
    if (open.strings == 0) {
      warn("TextLine " + open.id_attr + " has no String children; skipped");
      return;
    }
    // TextLines outside any Page share one implicit page.
    const std::string page = page_id ? *page_id : source + "/page0";
    std::size_t& index = page_id ? page_line_index : implicit_index;
    TranscribedLine out;
    out.id = page + "/" + open.id_attr;
    out.text = unicode::nfc(open.text);
    if (unicode::contains_line_break(out.text)) {
      throw DataError(source + ": TextLine " + open.id_attr + " contains a line break");
    }
    out.language = options.language;
    out.split = options.split;
    out.page_id = page;
    out.line_index = index++;
    if (open.x && open.y && open.w && open.h) {
      const BBox box{*open.x, *open.y, *open.w, *open.h};
      if (box.valid()) {
        out.bbox = box;
      } else {
        warn("TextLine " + open.id_attr + " has a degenerate box; box dropped");
      }
    }
    lines.push_back(std::move(out));
  }
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

std::vector<TranscribedLine> parse(std::string_view xml, std::string_view id_prefix,
                                   std::string_view error_source, const AltoOptions& options,
                                   Diagnostics* diagnostics) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(XML_ParserCreate(nullptr));
  if (!parser) throw Error("cannot create XML parser");
  Handler handler{options, diagnostics, std::string(id_prefix)};
  std::exception_ptr failure;
  struct Context {
    Handler* handler;
    std::exception_ptr* failure;
    XML_Parser parser;
  } ctx{&handler, &failure, parser.get()};
  XML_SetUserData(parser.get(), &ctx);
  // Handler exceptions must not unwind through the C library.
  XML_SetElementHandler(
      parser.get(),
      [](void* data, const XML_Char* name, const XML_Char** attrs) {
        auto* c = static_cast<Context*>(data);
        try {
          c->handler->start(local_name(name), attrs);
        } catch (...) {
          *c->failure = std::current_exception();
          XML_StopParser(c->parser, XML_FALSE);
        }
      },
      [](void* data, const XML_Char* name) {
        auto* c = static_cast<Context*>(data);
        try {
          c->handler->end(local_name(name));
        } catch (...) {
          *c->failure = std::current_exception();
          XML_StopParser(c->parser, XML_FALSE);
        }
      });
  const auto status = XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  if (failure) std::rethrow_exception(failure);
  if (status != XML_STATUS_OK) {
    throw ParseError(std::string(error_source), XML_GetCurrentLineNumber(parser.get()),
                     XML_GetCurrentColumnNumber(parser.get()) + 1,
                     XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  return std::move(handler.lines);
}

}  // namespace

std::vector<TranscribedLine> parse_alto_string(std::string_view xml, std::string_view source_name,
                                               const AltoOptions& options, Diagnostics* diagnostics) {
  return parse(xml, source_name, source_name, options, diagnostics);
}

std::vector<TranscribedLine> parse_alto(const fs::path& file, const AltoOptions& options,
                                        Diagnostics* diagnostics) {
  const std::string xml = detail::read_file(file);
  std::string name = file.filename().string();
  for (std::string_view ext : {".xml", ".alto"}) {
    if (detail::ends_with(name, ext)) name.resize(name.size() - ext.size());
  }
  return parse(xml, name, file.string(), options, diagnostics);
}

}  // namespace ocreval
