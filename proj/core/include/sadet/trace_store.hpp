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

#ifndef SADET_TRACE_STORE_HPP
#define SADET_TRACE_STORE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sadet/classifier.hpp"

namespace sadet {

struct TraceRow {
  std::string input_id;
  std::uint32_t label_id = 0;
  std::vector<double> values;
};

/// A set of traces taken from one layer.
///
/// Text layout, one record per line, tab-separated:
///
///     sadet-traces<TAB>1<TAB><layer><TAB><dim><TAB><count>
///     <input_id><TAB><label_id><TAB><v_0><TAB>...<TAB><v_dim-1>
///
/// Values use the shortest decimal form that round-trips.
struct TraceTable {
  std::string layer;
  std::size_t dim = 0;
  std::vector<TraceRow> rows;
};

void write_traces(std::ostream& out, const TraceTable& table);
TraceTable read_traces(std::istream& in);

void save_traces(const std::filesystem::path& path, const TraceTable& table);
TraceTable load_traces(const std::filesystem::path& path);

}  // namespace sadet

#endif  // SADET_TRACE_STORE_HPP
