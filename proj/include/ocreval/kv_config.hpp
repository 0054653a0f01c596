// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reader for the TOML subset used by configuration files: comments, [table]
// and [dotted.table] headers, bare or quoted keys, basic and literal strings,
// integers, floats, booleans, and (possibly nested, possibly multi-line)
// inline arrays.

#include <filesystem>
#include <string_view>

#include "nlohmann/json.hpp"

namespace ocreval {

/// Keys keep file order. Throws ParseError with line and column.
nlohmann::ordered_json parse_kv_config(std::string_view text, std::string_view source = "<string>");
nlohmann::ordered_json load_kv_config(const std::filesystem::path& path);

}  // namespace ocreval
