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

#ifndef SADET_STUB_SERVICE_HPP
#define SADET_STUB_SERVICE_HPP

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "sadet/bow_model.hpp"

namespace sadet::stub {

/// How the stub answers POST /classify.
enum class Mode {
  ok,             ///< {"label", "probs", "trace"} from the wrapped model
  no_label,       ///< object without "label"
  unknown_label,  ///< label outside the model's label set
  bad_probs,      ///< "probs" is a string
  no_trace,       ///< label and probs only
  not_json,       ///< plain text body
  server_error,   ///< HTTP 500
};

Mode mode_from_string(std::string_view name);

/// Local model service speaking the remote classifier protocol, backed by a BowModel.
class StubService {
 public:
  StubService(BowModel model, Mode mode = Mode::ok, std::string required_token = {});
  ~StubService();
  StubService(const StubService&) = delete;
  StubService& operator=(const StubService&) = delete;

  /// Binds to `host` on an ephemeral port (or `port` when non-zero) and serves in
  /// a background thread. Returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks serving on the calling thread.
  void serve(const std::string& host, int port);
  void stop();

  std::string endpoint() const;
  std::size_t requests() const noexcept { return requests_.load(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<std::size_t> requests_{0};
  std::thread thread_;
  std::string host_;
  int port_ = 0;
};

}  // namespace sadet::stub

#endif  // SADET_STUB_SERVICE_HPP
