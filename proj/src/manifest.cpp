// SPDX-License-Identifier: Apache-2.0
#include <set>
#include <sstream>

#include "io.hpp"
#include "nlohmann/json.hpp"
#include "ocreval/corpus.hpp"
#include "ocreval/error.hpp"
#include "ocreval/unicode.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ocreval {

namespace {

json entry_to_json(const TranscribedLine& line) {
  json j;
  j["id"] = line.id;
  j["text"] = line.text;
  j["language"] = line.language;
  j["split"] = std::string(to_string(line.split));
  j["image_path"] = line.image_path ? json(line.image_path->generic_string()) : json(nullptr);
  if (line.bbox) {
    j["bbox"] = {{"x", line.bbox->x}, {"y", line.bbox->y}, {"width", line.bbox->width},
                 {"height", line.bbox->height}};
  } else {
    j["bbox"] = nullptr;
  }
  j["page_id"] = line.page_id ? json(*line.page_id) : json(nullptr);
  j["line_index"] = line.line_index;
  return j;
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

TranscribedLine entry_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("entry must be a JSON object");
  TranscribedLine line;
  line.id = require_string(j, "id");
  const std::string text = require_string(j, "text");
  if (!unicode::is_nfc(text)) throw std::invalid_argument("text is not NFC");
  if (unicode::contains_line_break(text)) throw std::invalid_argument("text contains a line break");
  line.text = text;
  line.language = require_string(j, "language");
  line.split = parse_split(require_string(j, "split"));
  if (const json& p = require(j, "image_path"); !p.is_null()) {
    if (!p.is_string()) throw std::invalid_argument("image_path must be a string or null");
    line.image_path = fs::path(p.get<std::string>());
  }
  if (const json& b = require(j, "bbox"); !b.is_null()) {
    BBox box{require(b, "x").get<double>(), require(b, "y").get<double>(),
             require(b, "width").get<double>(), require(b, "height").get<double>()};
    if (!box.valid()) throw std::invalid_argument("bbox width and height must be positive");
    line.bbox = box;
  }
  if (const json& p = require(j, "page_id"); !p.is_null()) line.page_id = p.get<std::string>();
  const json& index = require(j, "line_index");
  if (!index.is_number_unsigned() && !(index.is_number_integer() && index.get<long long>() >= 0)) {
    throw std::invalid_argument("line_index must be a non-negative integer");
  }
  line.line_index = index.get<std::size_t>();
  return line;
}

}  // namespace

void validate(const DatasetManifest& manifest) {
  std::set<std::string_view> ids;
  std::set<std::pair<std::string, std::size_t>> positions;
  for (const auto& entry : manifest.entries) {
    if (!ids.insert(entry.id).second) throw DataError("duplicate manifest id: " + entry.id);
    if (entry.split == Split::Synth && (!entry.image_path || entry.image_path->empty())) {
      throw DataError("Synth entry without image_path: " + entry.id);
    }
    if (entry.bbox && !entry.bbox->valid()) throw DataError("degenerate bbox: " + entry.id);
    if (!positions.emplace(entry.page_id.value_or(""), entry.line_index).second) {
      throw DataError("duplicate (page_id, line_index) at entry " + entry.id);
    }
  }
}

std::string manifest_to_string(const DatasetManifest& manifest) {
  validate(manifest);
  std::string out;
  json header;
  header["metadata"] = json::object();
  for (const auto& [key, value] : manifest.metadata) header["metadata"][key] = value;
  out += header.dump();
  out += '\n';
  for (const auto& entry : manifest.entries) {
    out += entry_to_json(entry).dump();
    out += '\n';
  }
  return out;
}

DatasetManifest manifest_from_string(std::string_view text, std::string_view source) {
  const std::string src(source);
  DatasetManifest manifest;
  std::set<std::string> ids;
  std::set<std::pair<std::string, std::size_t>> positions;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.find_first_not_of(" \t") == std::string_view::npos) continue;

    json j;
    try {
      j = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw ParseError(src, line_no, e.byte, "malformed JSON: " + std::string(e.what()));
    }
    if (!have_header) {
      if (!j.is_object() || !j.contains("metadata") || !j["metadata"].is_object()) {
        throw ParseError(src, line_no, 0, "first line must be a {\"metadata\": {...}} header");
      }
      for (const auto& [key, value] : j["metadata"].items()) {
        if (!value.is_string()) throw ParseError(src, line_no, 0, "metadata values must be strings");
        manifest.metadata[key] = value.get<std::string>();
      }
      have_header = true;
      continue;
    }
    TranscribedLine entry;
    try {
      entry = entry_from_json(j);
    } catch (const std::exception& e) {
      throw ParseError(src, line_no, 0, e.what());
    }
    if (!ids.insert(entry.id).second) throw ParseError(src, line_no, 0, "duplicate id '" + entry.id + "'");
    if (entry.split == Split::Synth && !entry.image_path) {
      throw ParseError(src, line_no, 0, "Synth entry without image_path");
    }
    if (!positions.emplace(entry.page_id.value_or(""), entry.line_index).second) {
      throw ParseError(src, line_no, 0, "duplicate (page_id, line_index)");
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (!have_header) throw ParseError(src, 1, 0, "missing metadata header line");
  return manifest;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  const fs::path parent = path.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw DataError("parent directory does not exist: " + parent.string());
  }
  detail::write_file(path, manifest_to_string(manifest));
}

DatasetManifest read_manifest(const fs::path& path) {
  const std::string text = detail::read_file(path);
  return manifest_from_string(text, path.string());
}

}  // namespace ocreval
