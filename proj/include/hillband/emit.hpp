// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hillband {

inline constexpr const char* kVersion = "0.1.0";

/// A rectangular artifact: header plus rows of preformatted cells. Floats
/// must already be rendered with format_g17 so CSV output is lossless and
/// byte-stable.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// %.17g rendering used for every float an artifact carries.
std::string format_g17(double v);

std::string to_csv(const Table& table);

/// JSON artifact: {"meta": meta, "records": [{column: cell, ...}]}. Cells
/// that parse as finite numbers are emitted as JSON numbers.
nlohmann::json to_json_records(const Table& table, const nlohmann::json& meta);

void write_file(const std::string& path, const std::string& content);

}  // namespace hillband
