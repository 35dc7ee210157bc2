// Copyright 2026 The sadet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sadet/trace_store.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "sadet/error.hpp"
#include "sadet/numfmt.hpp"

namespace sadet {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

void write_traces(std::ostream& out, const TraceTable& table) {
  if (table.layer.find_first_of("\t\r\n") != std::string::npos) {
    throw DataError("layer id contains a tab or newline");
  }
  out << "sadet-traces\t1\t" << table.layer << '\t' << table.dim << '\t' << table.rows.size() << '\n';
  for (const auto& row : table.rows) {
    if (row.values.size() != table.dim) {
      throw DimensionError("trace '" + row.input_id + "' has " + std::to_string(row.values.size()) +
                           " values, table dim is " + std::to_string(table.dim));
    }
    if (row.input_id.empty() || row.input_id.find_first_of("\t\r\n") != std::string::npos) {
      throw DataError("trace input id is empty or contains a tab or newline");
    }
    out << row.input_id << '\t' << row.label_id;
    for (double v : row.values) out << '\t' << format_double(v);
    out << '\n';
  }
}

TraceTable read_traces(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("trace store: empty file");
  const auto header = split_tabs(line);
  if (header.size() != 5 || header[0] != "sadet-traces" || header[1] != "1") {
    throw DataError("trace store: bad header");
  }
  TraceTable table;
  table.layer = std::string(header[2]);
  table.dim = static_cast<std::size_t>(parse_int(header[3]));
  const auto count = static_cast<std::size_t>(parse_int(header[4]));
  table.rows.reserve(count);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != table.dim + 2) {
      throw DimensionError("trace store line " + std::to_string(line_no) + ": expected " +
                           std::to_string(table.dim + 2) + " fields");
    }
    TraceRow row;
    row.input_id = std::string(fields[0]);
    row.label_id = static_cast<std::uint32_t>(parse_int(fields[1]));
    row.values.reserve(table.dim);
    for (std::size_t i = 2; i < fields.size(); ++i) row.values.push_back(parse_double(fields[i]));
    table.rows.push_back(std::move(row));
  }
  if (table.rows.size() != count) {
    throw DataError("trace store: header says " + std::to_string(count) + " rows, found " +
                    std::to_string(table.rows.size()));
  }
  return table;
}

void save_traces(const std::filesystem::path& path, const TraceTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_traces(out, table);
}

TraceTable load_traces(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_traces(in);
}

}  // namespace sadet
