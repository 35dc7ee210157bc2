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

#ifndef SADET_MODEL_IO_HPP
#define SADET_MODEL_IO_HPP

#include <filesystem>
#include <iosfwd>

#include "sadet/bow_model.hpp"

namespace sadet {

/// JSON model file: labels, vocabulary, dimensions, row-major weights and
/// training metadata. Doubles are written in shortest round-trip form, so a
/// reloaded model predicts bit-identically.
void write_model(std::ostream& out, const BowModel& model);
BowModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const BowModel& model);
BowModel load_model(const std::filesystem::path& path);

}  // namespace sadet

#endif  // SADET_MODEL_IO_HPP
