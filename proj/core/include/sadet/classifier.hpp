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

#ifndef SADET_CLASSIFIER_HPP
#define SADET_CLASSIFIER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sadet/datamodel.hpp"

namespace sadet {

/// Output of one layer for one input.
struct ActivationTrace {
  std::vector<double> values;
  std::string layer;
  std::string input_id;
};

struct Prediction {
  ClassLabel label;
  std::vector<double> probs;                  ///< may be empty for remote models
  std::optional<std::vector<double>> trace;  ///< present when the model exposes one
};

/// Anything that maps text to a class, and optionally exposes an activation trace.
///
/// Implementations must be safe to call concurrently from several threads.
class TextClassifier {
 public:
  virtual ~TextClassifier() = default;

  virtual Prediction predict(std::string_view id, std::string_view text) const = 0;

  virtual const LabelSet& labels() const = 0;

  /// Identifier of the traced layer.
  virtual std::string trace_layer() const = 0;
};

}  // namespace sadet

#endif  // SADET_CLASSIFIER_HPP
