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

#ifndef SADET_BOW_MODEL_HPP
#define SADET_BOW_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sadet/classifier.hpp"
#include "sadet/datamodel.hpp"

namespace sadet {

/// Lower-cased maximal runs of ASCII letters and digits, in order.
std::vector<std::string> tokenize(std::string_view text);

class Vocab {
 public:
  Vocab() = default;

  /// Takes tokens in their final order; throws ConfigError on duplicates.
  Vocab(std::vector<std::string> tokens, std::size_t min_count, std::size_t max_size);

  /// Tokens of `data` with count >= min_count, ordered by (count desc, token asc),
  /// truncated to max_size.
  static Vocab build(const Dataset& data, std::size_t min_count = 1,
                     std::size_t max_size = std::numeric_limits<std::size_t>::max());

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  std::span<const std::string> tokens() const noexcept { return tokens_; }
  std::optional<std::uint32_t> find(std::string_view token) const;
  std::size_t min_count() const noexcept { return min_count_; }
  std::size_t max_size() const noexcept { return max_size_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t min_count_ = 1;
  std::size_t max_size_ = std::numeric_limits<std::size_t>::max();
};

/// Sparse vector with strictly increasing indices.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;
};

/// Token counts over the vocabulary; out-of-vocabulary tokens are dropped.
SparseVector featurize(std::string_view text, const Vocab& vocab);

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  std::size_t batch_size = 0;
  std::vector<double> epoch_loss;  ///< mean training loss after each epoch

  friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

/// Weights of the bag-of-words network: counts -> ReLU hidden layer -> softmax.
struct ModelParams {
  Matrix w1;               ///< hidden_dim x input_dim
  std::vector<double> b1;  ///< hidden_dim
  Matrix w2;               ///< classes x hidden_dim
  std::vector<double> b2;  ///< classes
  TrainingMetadata meta;

  std::size_t input_dim() const noexcept { return w1.cols; }
  std::size_t hidden_dim() const noexcept { return w1.rows; }
  std::size_t num_classes() const noexcept { return w2.rows; }

  /// Shapes agree, classes >= 2, hidden_dim >= 1, all entries finite. Throws DimensionError.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct Hyperparams {
  std::size_t hidden_dim = 64;
  std::size_t epochs = 30;
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
};

/// Glorot-uniform weights from `seed`, zero biases.
ModelParams init_params(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes,
                        std::uint64_t seed);

/// Softmax with the max logit subtracted first.
std::vector<double> softmax(std::span<const double> logits);

/// Index of the largest value; ties go to the lowest index.
std::uint32_t argmax(std::span<const double> values);

struct ForwardPass {
  std::vector<double> pre;     ///< W1 x + b1
  std::vector<double> hidden;  ///< relu(pre)
  std::vector<double> logits;  ///< W2 hidden + b2
  std::vector<double> probs;
};

ForwardPass forward(const ModelParams& params, const SparseVector& x);

/// Logits from a hidden-layer trace: W2 h + b2.
std::vector<double> logits_from_hidden(const ModelParams& params, std::span<const double> hidden);

struct Example {
  SparseVector x;
  std::uint32_t label = 0;
};

struct Gradients {
  Matrix w1;
  std::vector<double> b1;
  Matrix w2;
  std::vector<double> b2;
};

/// Mean cross-entropy over `batch`; when `grad` is non-null it receives the
/// gradient of that mean with respect to every parameter.
double loss_and_gradients(const ModelParams& params, std::span<const Example> batch,
                          Gradients* grad);

/// Mini-batch gradient descent on mean cross-entropy. Single-threaded and fully
/// determined by `hp.seed`. Throws TrainingError on a single-class set or a
/// non-finite loss.
ModelParams train(std::span<const Example> examples, std::size_t input_dim,
                  std::size_t num_classes, const Hyperparams& hp);

std::vector<Example> make_examples(const Dataset& data, const Vocab& vocab);

enum class TraceLayer { hidden, logits };

std::string_view to_string(TraceLayer layer) noexcept;
TraceLayer trace_layer_from_string(std::string_view name);

/// The built-in reference classifier.
class BowModel final : public TextClassifier {
 public:
  BowModel(Vocab vocab, ModelParams params, LabelSet labels,
           TraceLayer layer = TraceLayer::hidden);

  /// Builds the vocabulary from `train_set` and trains on it.
  static BowModel fit(const Dataset& train_set, const Hyperparams& hp, std::size_t min_count = 1,
                      std::size_t max_vocab = std::numeric_limits<std::size_t>::max());

  Prediction predict(std::string_view id, std::string_view text) const override;
  const LabelSet& labels() const override { return labels_; }
  std::string trace_layer() const override { return std::string(to_string(layer_)); }

  ActivationTrace trace(std::string_view id, std::string_view text) const;

  /// Fraction of items whose predicted label equals the annotated one.
  double accuracy(const Dataset& data) const;

  const Vocab& vocab() const noexcept { return vocab_; }
  const ModelParams& params() const noexcept { return params_; }
  TraceLayer layer() const noexcept { return layer_; }

 private:
  Vocab vocab_;
  ModelParams params_;
  LabelSet labels_;
  TraceLayer layer_;
};

}  // namespace sadet

#endif  // SADET_BOW_MODEL_HPP
