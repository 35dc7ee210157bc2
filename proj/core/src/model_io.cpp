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

#include "sadet/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sadet/error.hpp"

namespace sadet {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "sadet-model";
constexpr int kVersion = 1;

std::vector<double> doubles(const json& j, const char* key, std::size_t expected) {
  auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != expected) {
    throw DataError(std::string("model file: '") + key + "' has " + std::to_string(v.size()) +
                    " values, expected " + std::to_string(expected));
  }
  return v;
}

}  // namespace

void write_model(std::ostream& out, const BowModel& model) {
  const ModelParams& p = model.params();
  json labels = json::array();
  for (const auto& l : model.labels().labels()) labels.push_back(l.name);
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["labels"] = labels;
  j["trace_layer"] = std::string(to_string(model.layer()));
  j["vocab"] = {{"tokens", std::vector<std::string>(model.vocab().tokens().begin(),
                                                    model.vocab().tokens().end())},
                {"min_count", model.vocab().min_count()},
                {"max_size", model.vocab().max_size()}};
  j["input_dim"] = p.input_dim();
  j["hidden_dim"] = p.hidden_dim();
  j["num_classes"] = p.num_classes();
  j["w1"] = p.w1.data;
  j["b1"] = p.b1;
  j["w2"] = p.w2.data;
  j["b2"] = p.b2;
  j["training"] = {{"seed", p.meta.seed},
                   {"epochs", p.meta.epochs},
                   {"learning_rate", p.meta.learning_rate},
                   {"batch_size", p.meta.batch_size},
                   {"epoch_loss", p.meta.epoch_loss}};
  out << j.dump(1) << '\n';
}

BowModel read_model(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
    if (j.value("format", "") != kFormat) throw DataError("model file: not a sadet model");
    if (j.value("version", 0) != kVersion) throw DataError("model file: unsupported version");

    const auto d = j.at("input_dim").get<std::size_t>();
    const auto h = j.at("hidden_dim").get<std::size_t>();
    const auto m = j.at("num_classes").get<std::size_t>();
    ModelParams p;
    p.w1 = Matrix(h, d);
    p.w1.data = doubles(j, "w1", h * d);
    p.b1 = doubles(j, "b1", h);
    p.w2 = Matrix(m, h);
    p.w2.data = doubles(j, "w2", m * h);
    p.b2 = doubles(j, "b2", m);
    const json& t = j.at("training");
    p.meta.seed = t.at("seed").get<std::uint64_t>();
    p.meta.epochs = t.at("epochs").get<std::size_t>();
    p.meta.learning_rate = t.at("learning_rate").get<double>();
    p.meta.batch_size = t.at("batch_size").get<std::size_t>();
    p.meta.epoch_loss = t.at("epoch_loss").get<std::vector<double>>();

    const json& v = j.at("vocab");
    Vocab vocab(v.at("tokens").get<std::vector<std::string>>(), v.at("min_count").get<std::size_t>(),
                v.at("max_size").get<std::size_t>());
    LabelSet labels(j.at("labels").get<std::vector<std::string>>());
    return BowModel(std::move(vocab), std::move(p), std::move(labels),
                    trace_layer_from_string(j.value("trace_layer", "hidden")));
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const BowModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_model(out, model);
  if (!out) throw Error("write failed: '" + path.string() + "'");
}

BowModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path.string() + "'");
  return read_model(in);
}

}  // namespace sadet
