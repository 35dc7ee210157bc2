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

#ifndef SADET_REMOTE_HPP
#define SADET_REMOTE_HPP

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sadet/classifier.hpp"

namespace sadet {

/// Environment variable holding a bearer token for the remote service.
/// The value is sent as "Authorization: Bearer <token>" and never logged.
inline constexpr const char* kRemoteTokenEnv = "SADET_REMOTE_TOKEN";

struct RemoteOptions {
  std::chrono::milliseconds timeout{10000};
  /// Extra attempts after a transport failure. HTTP errors are not retried.
  int retries = 2;
  std::string token_env = kRemoteTokenEnv;
};

struct RemoteResponse {
  std::string label;
  std::optional<std::vector<double>> probs;
  std::optional<std::vector<double>> trace;
  std::string raw_body;
};

/// Parses a /classify response body. Throws RemoteModelError carrying `body`
/// when it is not an object with a string "label" and optional numeric arrays
/// "probs" and "trace".
RemoteResponse parse_remote_response(std::string_view body);

/// POST {endpoint}/classify with {"id": ..., "text": ...}.
///
/// `endpoint` is "http://host[:port][/base]". Throws RemoteModelError on
/// timeout, transport failure after retries, non-2xx status or schema violation.
RemoteResponse remote_classify(std::string_view endpoint, std::string_view id,
                               std::string_view text, const RemoteOptions& options = {});

/// TextClassifier backed by a remote service. Labels returned by the service
/// must name classes of `labels`.
class RemoteClassifier final : public TextClassifier {
 public:
  RemoteClassifier(std::string endpoint, LabelSet labels, RemoteOptions options = {});

  Prediction predict(std::string_view id, std::string_view text) const override;
  const LabelSet& labels() const override { return labels_; }
  std::string trace_layer() const override { return "remote"; }

  const std::string& endpoint() const noexcept { return endpoint_; }

 private:
  std::string endpoint_;
  LabelSet labels_;
  RemoteOptions options_;
};

}  // namespace sadet

#endif  // SADET_REMOTE_HPP
