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

#include "sadet/bow_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sadet/error.hpp"
#include "sadet/hash.hpp"

namespace sadet {
namespace {

bool is_alnum(char c) noexcept {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

void zero(Gradients& g, const ModelParams& p) {
  g.w1 = Matrix(p.hidden_dim(), p.input_dim());
  g.b1.assign(p.hidden_dim(), 0.0);
  g.w2 = Matrix(p.num_classes(), p.hidden_dim());
  g.b2.assign(p.num_classes(), 0.0);
}

double log_sum_exp(std::span<const double> z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - zmax);
  return zmax + std::log(s);
}

// Accumulates summed (not averaged) gradients of the batch into `g` and returns
// the summed loss. Columns of W1 that receive a contribution are flagged in
// `touched` and appended to `touched_cols`.
double accumulate(const ModelParams& p, std::span<const Example> batch, Gradients& g,
                  std::vector<char>& touched, std::vector<std::uint32_t>& touched_cols) {
  const std::size_t h = p.hidden_dim();
  const std::size_t m = p.num_classes();
  double loss = 0.0;
  std::vector<double> dz(m), dpre(h);
  for (const auto& ex : batch) {
    const ForwardPass f = forward(p, ex.x);
    loss += log_sum_exp(f.logits) - f.logits[ex.label];

    for (std::size_t c = 0; c < m; ++c) dz[c] = f.probs[c] - (c == ex.label ? 1.0 : 0.0);
    for (std::size_t c = 0; c < m; ++c) {
      g.b2[c] += dz[c];
      auto row = g.w2.row(c);
      for (std::size_t j = 0; j < h; ++j) row[j] += dz[c] * f.hidden[j];
    }
    for (std::size_t j = 0; j < h; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < m; ++c) s += p.w2(c, j) * dz[c];
      dpre[j] = f.pre[j] > 0.0 ? s : 0.0;
      g.b1[j] += dpre[j];
    }
    for (const auto& [idx, val] : ex.x.entries) {
      if (!touched[idx]) {
        touched[idx] = 1;
        touched_cols.push_back(idx);
      }
      for (std::size_t j = 0; j < h; ++j) g.w1(j, idx) += dpre[j] * val;
    }
  }
  return loss;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alnum(text[i])) {
      ++i;
      continue;
    }
    std::string tok;
    while (i < text.size() && is_alnum(text[i])) {
      char c = text[i++];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
      tok.push_back(c);
    }
    out.push_back(std::move(tok));
  }
  return out;
}

Vocab::Vocab(std::vector<std::string> tokens, std::size_t min_count, std::size_t max_size)
    : tokens_(std::move(tokens)), min_count_(min_count), max_size_(max_size) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<std::uint32_t>(i)).second) {
      throw ConfigError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

Vocab Vocab::build(const Dataset& data, std::size_t min_count, std::size_t max_size) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& item : data.items) {
    for (auto& tok : tokenize(item.text)) ++counts[std::move(tok)];
  }
  std::vector<std::pair<std::string, std::size_t>> sorted;
  for (auto& [tok, n] : counts) {
    if (n >= min_count) sorted.emplace_back(tok, n);
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (sorted.size() > max_size) sorted.resize(max_size);
  std::vector<std::string> tokens;
  tokens.reserve(sorted.size());
  for (auto& [tok, n] : sorted) tokens.push_back(std::move(tok));
  return Vocab(std::move(tokens), min_count, max_size);
}

std::optional<std::uint32_t> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector featurize(std::string_view text, const Vocab& vocab) {
  SparseVector v;
  v.dim = vocab.size();
  std::vector<std::uint32_t> ids;
  for (const auto& tok : tokenize(text)) {
    if (auto id = vocab.find(tok)) ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  for (std::uint32_t id : ids) {
    if (!v.entries.empty() && v.entries.back().first == id) {
      v.entries.back().second += 1.0;
    } else {
      v.entries.emplace_back(id, 1.0);
    }
  }
  return v;
}

void ModelParams::validate() const {
  const std::size_t d = input_dim(), h = hidden_dim(), m = num_classes();
  if (h < 1) throw DimensionError("hidden_dim must be >= 1");
  if (m < 2) throw DimensionError("model needs at least 2 classes");
  if (w1.data.size() != h * d || b1.size() != h || w2.cols != h || w2.data.size() != m * h ||
      b2.size() != m) {
    throw DimensionError("model parameter shapes disagree");
  }
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(w1.data) || !finite(b1) || !finite(w2.data) || !finite(b2)) {
    throw DimensionError("model parameters contain non-finite values");
  }
}

ModelParams init_params(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes,
                        std::uint64_t seed) {
  ModelParams p;
  p.w1 = Matrix(hidden_dim, input_dim);
  p.b1.assign(hidden_dim, 0.0);
  p.w2 = Matrix(num_classes, hidden_dim);
  p.b2.assign(num_classes, 0.0);
  Rng rng(mix64(seed));
  const double a1 = std::sqrt(6.0 / static_cast<double>(input_dim + hidden_dim));
  for (double& w : p.w1.data) w = rng.uniform(-a1, a1);
  const double a2 = std::sqrt(6.0 / static_cast<double>(hidden_dim + num_classes));
  for (double& w : p.w2.data) w = rng.uniform(-a2, a2);
  p.meta.seed = seed;
  return p;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double zmax = *std::max_element(logits.begin(), logits.end());
  double s = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - zmax);
    s += out[i];
  }
  for (double& v : out) v /= s;
  return out;
}

std::uint32_t argmax(std::span<const double> values) {
  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

ForwardPass forward(const ModelParams& p, const SparseVector& x) {
  if (x.dim != p.input_dim()) {
    throw DimensionError("feature dimension " + std::to_string(x.dim) + " != model input " +
                         std::to_string(p.input_dim()));
  }
  ForwardPass f;
  f.pre = p.b1;
  for (std::size_t j = 0; j < p.hidden_dim(); ++j) {
    const auto row = p.w1.row(j);
    double s = f.pre[j];
    for (const auto& [idx, val] : x.entries) s += row[idx] * val;
    f.pre[j] = s;
  }
  f.hidden.resize(f.pre.size());
  for (std::size_t j = 0; j < f.pre.size(); ++j) f.hidden[j] = f.pre[j] > 0.0 ? f.pre[j] : 0.0;
  f.logits = logits_from_hidden(p, f.hidden);
  f.probs = softmax(f.logits);
  return f;
}

std::vector<double> logits_from_hidden(const ModelParams& p, std::span<const double> hidden) {
  if (hidden.size() != p.hidden_dim()) throw DimensionError("hidden trace has wrong length");
  std::vector<double> z(p.num_classes());
  for (std::size_t c = 0; c < z.size(); ++c) {
    const auto row = p.w2.row(c);
    double s = p.b2[c];
    for (std::size_t j = 0; j < hidden.size(); ++j) s += row[j] * hidden[j];
    z[c] = s;
  }
  return z;
}

double loss_and_gradients(const ModelParams& params, std::span<const Example> batch,
                          Gradients* grad) {
  if (batch.empty()) return 0.0;
  Gradients local;
  Gradients& g = grad ? *grad : local;
  zero(g, params);
  std::vector<char> touched(params.input_dim(), 0);
  std::vector<std::uint32_t> cols;
  const double n = static_cast<double>(batch.size());
  const double loss = accumulate(params, batch, g, touched, cols) / n;
  for (double& v : g.w1.data) v /= n;
  for (double& v : g.b1) v /= n;
  for (double& v : g.w2.data) v /= n;
  for (double& v : g.b2) v /= n;
  return loss;
}

ModelParams train(std::span<const Example> examples, std::size_t input_dim,
                  std::size_t num_classes, const Hyperparams& hp) {
  if (num_classes < 2) throw TrainingError("training needs at least 2 classes");
  if (hp.hidden_dim < 1 || hp.batch_size < 1) throw TrainingError("hidden_dim and batch_size must be >= 1");
  if (examples.empty()) throw TrainingError("empty training set");
  std::vector<char> present(num_classes, 0);
  for (const auto& ex : examples) {
    if (ex.label >= num_classes) throw TrainingError("example label out of range");
    present[ex.label] = 1;
  }
  if (std::count(present.begin(), present.end(), 1) < 2) {
    throw TrainingError("degenerate training set: only one class present");
  }

  ModelParams p = init_params(input_dim, hp.hidden_dim, num_classes, hp.seed);
  p.meta.epochs = hp.epochs;
  p.meta.learning_rate = hp.learning_rate;
  p.meta.batch_size = hp.batch_size;

  Rng shuffle_rng(mix64(hp.seed ^ 0x7368756666c3ULL));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  Gradients g;
  zero(g, p);
  std::vector<char> touched(input_dim, 0);
  std::vector<std::uint32_t> cols;
  std::vector<Example> batch;
  batch.reserve(hp.batch_size);

  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
      const std::size_t end = std::min(order.size(), start + hp.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(examples[order[i]]);
      accumulate(p, batch, g, touched, cols);

      const double step = hp.learning_rate / static_cast<double>(batch.size());
      for (std::uint32_t col : cols) {
        for (std::size_t j = 0; j < p.hidden_dim(); ++j) {
          p.w1(j, col) -= step * g.w1(j, col);
          g.w1(j, col) = 0.0;
        }
        touched[col] = 0;
      }
      cols.clear();
      for (std::size_t j = 0; j < p.b1.size(); ++j) {
        p.b1[j] -= step * g.b1[j];
        g.b1[j] = 0.0;
      }
      for (std::size_t i = 0; i < p.w2.data.size(); ++i) {
        p.w2.data[i] -= step * g.w2.data[i];
        g.w2.data[i] = 0.0;
      }
      for (std::size_t c = 0; c < p.b2.size(); ++c) {
        p.b2[c] -= step * g.b2[c];
        g.b2[c] = 0.0;
      }
    }
    const double loss = loss_and_gradients(p, examples, nullptr);
    if (!std::isfinite(loss)) {
      throw TrainingError("loss became non-finite at epoch " + std::to_string(epoch));
    }
    p.meta.epoch_loss.push_back(loss);
  }
  return p;
}

std::vector<Example> make_examples(const Dataset& data, const Vocab& vocab) {
  std::vector<Example> out;
  out.reserve(data.items.size());
  for (const auto& item : data.items) out.push_back({featurize(item.text, vocab), item.label.id});
  return out;
}

std::string_view to_string(TraceLayer layer) noexcept {
  return layer == TraceLayer::hidden ? "hidden" : "logits";
}

TraceLayer trace_layer_from_string(std::string_view name) {
  if (name == "hidden") return TraceLayer::hidden;
  if (name == "logits") return TraceLayer::logits;
  throw ConfigError("unknown trace layer '" + std::string(name) + "'");
}

BowModel::BowModel(Vocab vocab, ModelParams params, LabelSet labels, TraceLayer layer)
    : vocab_(std::move(vocab)), params_(std::move(params)), labels_(std::move(labels)), layer_(layer) {
  params_.validate();
  if (vocab_.size() != params_.input_dim()) throw DimensionError("vocabulary size != model input dim");
  if (labels_.size() != params_.num_classes()) throw DimensionError("label count != model classes");
}

BowModel BowModel::fit(const Dataset& train_set, const Hyperparams& hp, std::size_t min_count,
                       std::size_t max_vocab) {
  Vocab vocab = Vocab::build(train_set, min_count, max_vocab);
  if (vocab.empty()) throw TrainingError("empty vocabulary");
  const auto examples = make_examples(train_set, vocab);
  ModelParams params = train(examples, vocab.size(), train_set.labels.size(), hp);
  return BowModel(std::move(vocab), std::move(params), train_set.labels);
}

Prediction BowModel::predict(std::string_view id, std::string_view text) const {
  const ForwardPass f = forward(params_, featurize(text, vocab_));
  Prediction out;
  out.label = labels_.at(argmax(f.probs));
  out.trace = layer_ == TraceLayer::hidden ? f.hidden : f.logits;
  out.probs = f.probs;
  (void)id;
  return out;
}

ActivationTrace BowModel::trace(std::string_view id, std::string_view text) const {
  const ForwardPass f = forward(params_, featurize(text, vocab_));
  return ActivationTrace{layer_ == TraceLayer::hidden ? f.hidden : f.logits,
                         std::string(to_string(layer_)), std::string(id)};
}

double BowModel::accuracy(const Dataset& data) const {
  if (data.items.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& item : data.items) {
    if (predict(item.id, item.text).label.id == item.label.id) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.items.size());
}

}  // namespace sadet
