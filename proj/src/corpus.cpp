// SPDX-License-Identifier: Apache-2.0
#include "ocreval/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "io.hpp"
#include "ocreval/error.hpp"
#include "ocreval/unicode.hpp"

namespace fs = std::filesystem;

namespace ocreval {

namespace {

constexpr std::array<std::pair<Split, std::string_view>, 6> kSplitNames{{
    {Split::GT, "GT"},
    {Split::Pred, "Pred"},
    {Split::Synth, "Synth"},
    {Split::Val, "Val"},
    {Split::Test, "Test"},
    {Split::OOD, "OOD"},
}};

std::string read_line_text(const fs::path& file) {
  std::string raw = detail::read_file(file);
  if (!unicode::is_valid_utf8(raw)) throw DataError("not valid UTF-8: " + file.string());
  if (detail::ends_with(raw, "\r\n")) {
    raw.resize(raw.size() - 2);
  } else if (detail::ends_with(raw, "\n")) {
    raw.pop_back();
  }
  std::string text = unicode::nfc(raw);
  if (unicode::contains_line_break(text)) {
    throw DataError("transcription spans several lines: " + file.string());
  }
  return text;
}

std::vector<std::pair<std::string, fs::path>> list_stems(const fs::path& dir, std::string_view suffix,
                                                         std::string_view exclude_suffix) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<std::pair<std::string, fs::path>> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (!detail::ends_with(name, suffix) || name.size() == suffix.size()) continue;
    if (!exclude_suffix.empty() && detail::ends_with(name, exclude_suffix)) continue;
    stems.emplace_back(name.substr(0, name.size() - suffix.size()), entry.path());
  }
  std::ranges::sort(stems);
  return stems;
}

std::vector<TranscribedLine> load_text_files(const fs::path& dir, std::string_view suffix,
                                             std::string_view exclude_suffix,
                                             const GtLoadOptions& options, Diagnostics* diagnostics) {
  std::vector<TranscribedLine> lines;
  for (const auto& [stem, file] : list_stems(dir, suffix, exclude_suffix)) {
    TranscribedLine line;
    line.id = stem;
    line.text = read_line_text(file);
    line.language = options.language;
    line.split = options.split;
    line.line_index = lines.size();
    for (const auto& ext : options.image_extensions) {
      fs::path candidate = dir / (stem + "." + ext);
      if (fs::is_regular_file(candidate)) {
        line.image_path = candidate;
        break;
      }
    }
    if (!line.image_path) {
      if (options.require_image) throw DataError("no image for " + file.string());
      if (diagnostics) diagnostics->warn("no image for " + file.string());
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string page_key(const TranscribedLine& line) { return line.page_id.value_or(""); }

}  // namespace

std::string_view to_string(Split split) {
  for (const auto& [value, name] : kSplitNames) {
    if (value == split) return name;
  }
  return "GT";
}

Split parse_split(std::string_view name) {
  const auto lower = [](unsigned char c) { return static_cast<char>(std::tolower(c)); };
  for (const auto& [value, known] : kSplitNames) {
    if (std::ranges::equal(known, name, {}, lower, lower)) return value;
  }
  throw DataError("unknown split: " + std::string(name));
}

double iou(const BBox& a, const BBox& b) {
  if (!a.valid() || !b.valid()) return 0.0;
  const double ix = std::max(0.0, std::min(a.x + a.width, b.x + b.width) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.height, b.y + b.height) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

const std::vector<std::string>& default_languages() {
  static const std::vector<std::string> languages{"sma", "sme", "smj", "smn", "nor", "mixed"};
  return languages;
}

LinePair make_line_pair(TranscribedLine reference, std::string_view hypothesis, std::string source) {
  reference.text = unicode::nfc(reference.text);
  return LinePair{std::move(reference), unicode::nfc(hypothesis), std::move(source)};
}

std::vector<TranscribedLine> load_gt_pairs(const fs::path& dir, const GtLoadOptions& options,
                                           Diagnostics* diagnostics) {
  const std::string_view exclude = options.text_suffix == ".txt" ? ".gt.txt" : "";
  return load_text_files(dir, options.text_suffix, exclude, options, diagnostics);
}

std::vector<TranscribedLine> load_hypothesis_dir(const fs::path& dir, Diagnostics* diagnostics) {
  GtLoadOptions options;
  options.split = Split::Pred;
  // Hypotheses rarely sit next to images, so missing images are not reported.
  if (!list_stems(dir, ".txt", ".gt.txt").empty()) {
    return load_text_files(dir, ".txt", ".gt.txt", options, nullptr);
  }
  if (diagnostics) diagnostics->warn("no <stem>.txt files in " + dir.string() + "; reading <stem>.gt.txt");
  return load_text_files(dir, ".gt.txt", "", options, nullptr);
}

// ---------------------------------------------------------------------------

std::string_view to_string(MatchPolicy policy) {
  switch (policy) {
    case MatchPolicy::BBoxIou:
      return "bbox_iou";
    case MatchPolicy::Order:
      return "order";
    case MatchPolicy::Id:
      return "id";
  }
  return "order";
}

MatchPolicy parse_match_policy(std::string_view name) {
  if (name == "bbox_iou") return MatchPolicy::BBoxIou;
  if (name == "order") return MatchPolicy::Order;
  if (name == "id") return MatchPolicy::Id;
  throw DataError("unknown match policy: " + std::string(name));
}

MatchPolicy choose_match_policy(const std::vector<TranscribedLine>& gt,
                                const std::vector<TranscribedLine>& hyp) {
  auto boxed = [](const TranscribedLine& l) { return l.bbox.has_value(); };
  if (!gt.empty() && !hyp.empty() && std::ranges::all_of(gt, boxed) && std::ranges::all_of(hyp, boxed)) {
    return MatchPolicy::BBoxIou;
  }
  std::set<std::string_view> ids;
  for (const auto& line : hyp) ids.insert(line.id);
  for (const auto& line : gt) {
    if (ids.contains(line.id)) return MatchPolicy::Id;
  }
  return MatchPolicy::Order;
}

MatchResult match_hypotheses(const std::vector<TranscribedLine>& gt,
                             const std::vector<TranscribedLine>& hyp, MatchPolicy policy,
                             std::string_view source, double iou_threshold) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> gt_to_hyp(gt.size(), kNone);
  std::vector<bool> hyp_used(hyp.size(), false);

  switch (policy) {
    case MatchPolicy::BBoxIou: {
      for (const auto* side : {&gt, &hyp}) {
        for (const auto& line : *side) {
          if (!line.bbox) throw DataError("bbox_iou matching needs boxes; line without one: " + line.id);
        }
      }
      std::unordered_map<std::string, std::vector<std::size_t>> hyp_by_page;
      for (std::size_t j = 0; j < hyp.size(); ++j) hyp_by_page[page_key(hyp[j])].push_back(j);
      std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
      for (std::size_t i = 0; i < gt.size(); ++i) {
        auto it = hyp_by_page.find(page_key(gt[i]));
        if (it == hyp_by_page.end()) continue;
        for (std::size_t j : it->second) {
          const double overlap = iou(*gt[i].bbox, *hyp[j].bbox);
          if (overlap >= iou_threshold) candidates.emplace_back(overlap, i, j);
        }
      }
      std::ranges::sort(candidates, [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
      });
      for (const auto& [overlap, i, j] : candidates) {
        if (gt_to_hyp[i] != kNone || hyp_used[j]) continue;
        gt_to_hyp[i] = j;
        hyp_used[j] = true;
      }
      break;
    }
    case MatchPolicy::Order: {
      auto by_page = [](const std::vector<TranscribedLine>& lines) {
        std::map<std::string, std::vector<std::size_t>> pages;
        for (std::size_t k = 0; k < lines.size(); ++k) pages[page_key(lines[k])].push_back(k);
        for (auto& [page, idx] : pages) {
          std::ranges::stable_sort(idx, {}, [&](std::size_t k) { return lines[k].line_index; });
        }
        return pages;
      };
      const auto gt_pages = by_page(gt);
      const auto hyp_pages = by_page(hyp);
      for (const auto& [page, gt_idx] : gt_pages) {
        auto it = hyp_pages.find(page);
        if (it == hyp_pages.end()) continue;
        const std::size_t n = std::min(gt_idx.size(), it->second.size());
        for (std::size_t k = 0; k < n; ++k) {
          gt_to_hyp[gt_idx[k]] = it->second[k];
          hyp_used[it->second[k]] = true;
        }
      }
      break;
    }
    case MatchPolicy::Id: {
      std::unordered_map<std::string, std::size_t> hyp_by_id;
      for (std::size_t j = 0; j < hyp.size(); ++j) hyp_by_id.try_emplace(hyp[j].id, j);
      for (std::size_t i = 0; i < gt.size(); ++i) {
        auto it = hyp_by_id.find(gt[i].id);
        if (it == hyp_by_id.end() || hyp_used[it->second]) continue;
        gt_to_hyp[i] = it->second;
        hyp_used[it->second] = true;
      }
      break;
    }
  }

  MatchResult result;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt_to_hyp[i] == kNone) {
      result.unmatched_gt.push_back(gt[i]);
    } else {
      result.pairs.push_back(make_line_pair(gt[i], hyp[gt_to_hyp[i]].text, std::string(source)));
    }
  }
  for (std::size_t j = 0; j < hyp.size(); ++j) {
    if (!hyp_used[j]) result.unmatched_hyp.push_back(hyp[j]);
  }
  return result;
}

}  // namespace ocreval
