// SPDX-License-Identifier: Apache-2.0
#include "ocreval/align.hpp"

#include <algorithm>
#include <stdexcept>

#include "ocreval/parallel.hpp"
#include "ocreval/unicode.hpp"

namespace ocreval {

std::vector<AlignOp> align(std::u32string_view ref, std::u32string_view hyp) {
  const auto script = edit_script(ref, hyp);
  std::vector<AlignOp> ops;
  ops.reserve(script.size());
  std::size_t i = 0;
  std::size_t j = 0;
  for (EditKind kind : script) {
    AlignOp op{kind, std::nullopt, std::nullopt};
    if (kind != EditKind::Insert) op.ref_char = ref[i++];
    if (kind != EditKind::Delete) op.hyp_char = hyp[j++];
    ops.push_back(op);
  }
  return ops;
}

std::vector<AlignOp> align(std::string_view ref, std::string_view hyp) {
  return align(unicode::to_scalars(ref), unicode::to_scalars(hyp));
}

std::vector<ErrorSegment> merge_segments(const std::vector<AlignOp>& ops) {
  std::vector<ErrorSegment> segments;
  std::u32string ref;
  std::u32string hyp;
  bool open = false;
  auto flush = [&] {
    if (open) segments.push_back({unicode::to_utf8(ref), unicode::to_utf8(hyp)});
    ref.clear();
    hyp.clear();
    open = false;
  };
  for (const auto& op : ops) {
    if (op.kind == EditKind::Match) {
      flush();
      continue;
    }
    open = true;
    if (op.ref_char) ref.push_back(*op.ref_char);
    if (op.hyp_char) hyp.push_back(*op.hyp_char);
  }
  flush();
  return segments;
}

void ErrorTally::add(std::string_view ref, std::string_view hyp) {
  const std::u32string r = unicode::to_scalars(unicode::nfc(ref));
  const std::u32string h = unicode::to_scalars(unicode::nfc(hyp));
  for (char32_t c : r) ++occurrences_[c];
  for (auto& segment : merge_segments(align(r, h))) {
    const std::u32string seg_ref = unicode::to_scalars(segment.ref_str);
    if (seg_ref.size() == 1) ++misses_[seg_ref.front()];
    ++segments_[std::move(segment)];
  }
}

void ErrorTally::merge(const ErrorTally& other) {
  for (const auto& [k, v] : other.segments_) segments_[k] += v;
  for (const auto& [k, v] : other.misses_) misses_[k] += v;
  for (const auto& [k, v] : other.occurrences_) occurrences_[k] += v;
}

std::vector<std::pair<ErrorSegment, std::size_t>> ErrorTally::sorted_segments() const {
  std::vector<std::pair<ErrorSegment, std::size_t>> sorted(segments_.begin(), segments_.end());
  // Map order already sorts by (ref_str, hyp_str); stable sort keeps it for ties.
  std::ranges::stable_sort(sorted, [](const auto& a, const auto& b) { return a.second > b.second; });
  return sorted;
}

std::vector<ErrorTableRow> ErrorTally::rows(std::size_t top_n) const {
  std::vector<ErrorTableRow> rows;
  for (const auto& [segment, count] : sorted_segments()) {
    if (rows.size() >= top_n) break;
    ErrorTableRow row{segment, count, std::nullopt, std::nullopt};
    const std::u32string ref = unicode::to_scalars(segment.ref_str);
    if (ref.size() == 1) {
      auto m = misses_.find(ref.front());
      auto c = occurrences_.find(ref.front());
      row.n_m = m == misses_.end() ? 0 : m->second;
      row.n_c = c == occurrences_.end() ? 0 : c->second;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ErrorTableRow> tabulate_errors(const std::vector<LinePair>& pairs, std::size_t top_n,
                                           unsigned jobs) {
  if (top_n < 1) throw std::invalid_argument("tabulate_errors: top_n must be at least 1");
  const unsigned workers = std::max(1u, jobs);
  std::vector<ErrorTally> partial(workers);
  // Fixed striding keeps each partial tally independent of thread timing.
  parallel_for(workers, workers, [&](std::size_t w) {
    for (std::size_t i = w; i < pairs.size(); i += workers) {
      partial[w].add(pairs[i].reference.text, pairs[i].hypothesis_text);
    }
  });
  ErrorTally total;
  for (const auto& t : partial) total.merge(t);
  return total.rows(top_n);
}

namespace {

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string optional_count(const std::optional<std::size_t>& n, std::string_view absent) {
  return n ? std::to_string(*n) : std::string(absent);
}

std::string md_code(std::string_view s) {
  // Inline code cannot be empty in markdown; an empty side renders as ``.
  std::string escaped;
  for (char c : s) {
    if (c == '|') escaped += "\\|";
    else escaped += c;
  }
  return "`" + escaped + "`";
}

}  // namespace

std::string error_table_csv(const std::vector<ErrorTableRow>& rows) {
  std::string out = "ref,hyp,n_e,n_m,n_c\r\n";
  for (const auto& row : rows) {
    out += csv_field(row.segment.ref_str) + "," + csv_field(row.segment.hyp_str) + "," +
           std::to_string(row.n_e) + "," + optional_count(row.n_m, "") + "," +
           optional_count(row.n_c, "") + "\r\n";
  }
  return out;
}

std::string error_table_markdown(const std::vector<ErrorTableRow>& rows) {
  std::string out = "| Error | n_e | n_m | n_c |\n|---|---:|---:|---:|\n";
  for (const auto& row : rows) {
    out += "| " + md_code(row.segment.ref_str) + " → " + md_code(row.segment.hyp_str) + " | " +
           std::to_string(row.n_e) + " | " + optional_count(row.n_m, "--") + " | " +
           optional_count(row.n_c, "--") + " |\n";
  }
  return out;
}

}  // namespace ocreval
