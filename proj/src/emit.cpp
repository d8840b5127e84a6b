// SPDX-License-Identifier: Apache-2.0
#include "hillband/emit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace hillband {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) append_row(row);
  return out;
}

nlohmann::json to_json_records(const Table& table, const nlohmann::json& meta) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json rec = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& cell = row[i];
      const bool integral =
          !cell.empty() &&
          cell.find_first_not_of("0123456789", cell[0] == '-' ? 1 : 0) ==
              std::string::npos &&
          cell.size() <= 18;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (integral) {
        rec[table.header[i]] = std::strtoll(cell.c_str(), nullptr, 10);
      } else if (end && *end == '\0' && end != cell.c_str() && std::isfinite(v)) {
        rec[table.header[i]] = v;
      } else {
        rec[table.header[i]] = cell;
      }
    }
    records.push_back(std::move(rec));
  }
  return nlohmann::json{{"meta", meta}, {"records", std::move(records)}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

}  // namespace hillband
