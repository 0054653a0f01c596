// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocreval {

enum class Split { GT, Pred, Synth, Val, Test, OOD };

std::string_view to_string(Split split);
/// Throws DataError for unknown names.
Split parse_split(std::string_view name);

struct BBox {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  double area() const { return width * height; }
  bool valid() const { return width > 0 && height > 0; }
  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Intersection over union of two rectangles; 0 when either is degenerate.
double iou(const BBox& a, const BBox& b);

/// One transcribed text line: the atomic unit of every dataset.
struct TranscribedLine {
  std::string id;
  std::string text;  // NFC, no line breaks
  std::string language = "mixed";
  Split split = Split::GT;
  std::optional<std::filesystem::path> image_path;
  std::optional<BBox> bbox;
  std::optional<std::string> page_id;
  std::size_t line_index = 0;

  friend bool operator==(const TranscribedLine&, const TranscribedLine&) = default;
};

/// Language codes accepted by default.
const std::vector<std::string>& default_languages();

/// A (reference, hypothesis) line pair; both texts NFC.
struct LinePair {
  TranscribedLine reference;
  std::string hypothesis_text;
  std::string source;
};

/// Builds a pair, normalizing both texts to NFC.
LinePair make_line_pair(TranscribedLine reference, std::string_view hypothesis,
                        std::string source = "hyp");

/// Non-fatal problems found during ingestion.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

// ---------------------------------------------------------------------------
// tesstrain layout: <stem>.gt.txt + sibling image

struct GtLoadOptions {
  std::vector<std::string> image_extensions{"png", "tif", "jpg", "bin.png"};
  /// Suffix of the transcription files, ".gt.txt" for ground truth. Hypothesis
  /// directories produced by OCR engines typically use ".txt".
  std::string text_suffix = ".gt.txt";
  std::string language = "mixed";
  Split split = Split::GT;
  bool require_image = false;
};

/// One line per `<stem><text_suffix>` file, ordered by stem. Text is read as
/// UTF-8, stripped of one trailing newline, and NFC-normalized. Missing images
/// produce a warning (or a DataError if `require_image`).
std::vector<TranscribedLine> load_gt_pairs(const std::filesystem::path& dir,
                                           const GtLoadOptions& options = {},
                                           Diagnostics* diagnostics = nullptr);

/// Loads OCR output from a directory. Uses `<stem>.txt` files when any exist
/// (ignoring `.gt.txt`), otherwise falls back to `<stem>.gt.txt`.
std::vector<TranscribedLine> load_hypothesis_dir(const std::filesystem::path& dir,
                                                 Diagnostics* diagnostics = nullptr);

// ---------------------------------------------------------------------------
// ALTO-XML

struct AltoOptions {
  /// Append HYP CONTENT to the line text.
  bool keep_hyphenation = true;
  std::string language = "mixed";
  Split split = Split::GT;
};

std::vector<TranscribedLine> parse_alto(const std::filesystem::path& file,
                                        const AltoOptions& options = {},
                                        Diagnostics* diagnostics = nullptr);

/// Parses an in-memory document; `source_name` is used in ids and error messages.
std::vector<TranscribedLine> parse_alto_string(std::string_view xml,
                                               std::string_view source_name,
                                               const AltoOptions& options = {},
                                               Diagnostics* diagnostics = nullptr);

// ---------------------------------------------------------------------------
// GT/hypothesis matching

enum class MatchPolicy {
  BBoxIou,  // greedy highest-IoU-first within a page, IoU >= threshold
  Order,    // (page_id, line_index) order within a page
  Id,       // identical line ids
};

std::string_view to_string(MatchPolicy policy);
MatchPolicy parse_match_policy(std::string_view name);

struct MatchResult {
  std::vector<LinePair> pairs;
  std::vector<TranscribedLine> unmatched_gt;
  std::vector<TranscribedLine> unmatched_hyp;
};

inline constexpr double kDefaultIouThreshold = 0.5;

/// Pairs every GT line with at most one hypothesis line. Pairs are returned in
/// GT input order. Throws DataError if BBoxIou is requested for lines without boxes.
MatchResult match_hypotheses(const std::vector<TranscribedLine>& gt,
                             const std::vector<TranscribedLine>& hyp, MatchPolicy policy,
                             std::string_view source = "hyp",
                             double iou_threshold = kDefaultIouThreshold);

/// Policy used when none is requested: BBoxIou when every line on both sides
/// carries a box, else Id when the two sides share at least one line id, else Order.
MatchPolicy choose_match_policy(const std::vector<TranscribedLine>& gt,
                                const std::vector<TranscribedLine>& hyp);

// ---------------------------------------------------------------------------
// Manifest (JSON Lines; first line is a header object holding metadata)

struct DatasetManifest {
  std::vector<TranscribedLine> entries;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Throws DataError on duplicate ids or Synth entries without an image path.
void validate(const DatasetManifest& manifest);

std::string manifest_to_string(const DatasetManifest& manifest);
DatasetManifest manifest_from_string(std::string_view text, std::string_view source = "<string>");

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

}  // namespace ocreval
