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

#include "sadet/remote.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "sadet/error.hpp"
#include "sadet/log.hpp"

namespace sadet {
namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string base;    // path prefix without trailing slash
};

Endpoint split_endpoint(std::string_view url) {
  const auto scheme = url.find("://");
  if (scheme == std::string_view::npos) {
    throw ConfigError("endpoint '" + std::string(url) + "' must start with http://");
  }
  if (url.substr(0, scheme) != "http") {
    throw ConfigError("endpoint '" + std::string(url) + "': only http is supported");
  }
  const auto path = url.find('/', scheme + 3);
  Endpoint ep;
  ep.origin = std::string(url.substr(0, path));
  if (path != std::string_view::npos) {
    ep.base = std::string(url.substr(path));
    while (!ep.base.empty() && ep.base.back() == '/') ep.base.pop_back();
  }
  return ep;
}

std::optional<std::vector<double>> numeric_array(const json& obj, const char* key,
                                                 std::string_view body) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) {
    throw RemoteModelError(std::string("remote schema error: '") + key + "' is not an array",
                           std::string(body));
  }
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) {
      throw RemoteModelError(std::string("remote schema error: '") + key + "' has a non-number",
                             std::string(body));
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

RemoteResponse parse_remote_response(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error&) {
    throw RemoteModelError("remote schema error: body is not JSON", std::string(body));
  }
  if (!j.is_object()) throw RemoteModelError("remote schema error: body is not an object", std::string(body));
  auto label = j.find("label");
  if (label == j.end() || !label->is_string()) {
    throw RemoteModelError("remote schema error: missing string 'label'", std::string(body));
  }
  RemoteResponse r;
  r.label = label->get<std::string>();
  r.probs = numeric_array(j, "probs", body);
  r.trace = numeric_array(j, "trace", body);
  r.raw_body = std::string(body);
  return r;
}

RemoteResponse remote_classify(std::string_view endpoint, std::string_view id,
                               std::string_view text, const RemoteOptions& options) {
  const Endpoint ep = split_endpoint(endpoint);
  httplib::Client client(ep.origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!options.token_env.empty()) {
    if (const char* token = std::getenv(options.token_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  const std::string body = json{{"id", id}, {"text", text}}.dump();
  const std::string path = ep.base + "/classify";
  std::string last_error;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      log(LogLevel::debug, "remote attempt " + std::to_string(attempt + 1) + " failed: " + last_error);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw RemoteModelError("remote returned HTTP " + std::to_string(res->status), res->body);
    }
    return parse_remote_response(res->body);
  }
  throw RemoteModelError("remote transport failure after " + std::to_string(options.retries + 1) +
                             " attempts: " + last_error,
                         "");
}

RemoteClassifier::RemoteClassifier(std::string endpoint, LabelSet labels, RemoteOptions options)
    : endpoint_(std::move(endpoint)), labels_(std::move(labels)), options_(std::move(options)) {
  split_endpoint(endpoint_);
}

Prediction RemoteClassifier::predict(std::string_view id, std::string_view text) const {
  RemoteResponse r = remote_classify(endpoint_, id, text, options_);
  auto label = labels_.find(r.label);
  if (!label) {
    throw RemoteModelError("remote schema error: unknown label '" + r.label + "'", r.raw_body);
  }
  if (r.probs && r.probs->size() != labels_.size()) {
    throw RemoteModelError("remote schema error: 'probs' has " + std::to_string(r.probs->size()) +
                               " entries for " + std::to_string(labels_.size()) + " classes",
                           r.raw_body);
  }
  Prediction p;
  p.label = *label;
  if (r.probs) p.probs = std::move(*r.probs);
  p.trace = std::move(r.trace);
  return p;
}

}  // namespace sadet
