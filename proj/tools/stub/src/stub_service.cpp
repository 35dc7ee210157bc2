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

#include "sadet_stub/stub_service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "sadet/error.hpp"

namespace sadet::stub {

using nlohmann::json;

Mode mode_from_string(std::string_view name) {
  if (name == "ok") return Mode::ok;
  if (name == "no_label") return Mode::no_label;
  if (name == "unknown_label") return Mode::unknown_label;
  if (name == "bad_probs") return Mode::bad_probs;
  if (name == "no_trace") return Mode::no_trace;
  if (name == "not_json") return Mode::not_json;
  if (name == "server_error") return Mode::server_error;
  throw ConfigError("unknown stub mode '" + std::string(name) + "'");
}

struct StubService::Impl {
  Impl(BowModel m, Mode md, std::string t) : model(std::move(m)), mode(md), token(std::move(t)) {}
  BowModel model;
  Mode mode;
  std::string token;
  httplib::Server server;
};

StubService::StubService(BowModel model, Mode mode, std::string required_token)
    : impl_(std::make_unique<Impl>(std::move(model), mode, std::move(required_token))) {
  impl_->server.Post("/classify", [this](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    const Impl& s = *impl_;
    if (!s.token.empty() && req.get_header_value("Authorization") != "Bearer " + s.token) {
      res.status = 401;
      res.set_content(R"({"error":"unauthorized"})", "application/json");
      return;
    }
    json in;
    try {
      in = json::parse(req.body);
    } catch (const json::exception&) {
      res.status = 400;
      res.set_content(R"({"error":"bad request"})", "application/json");
      return;
    }
    const std::string id = in.value("id", "");
    const std::string text = in.value("text", "");
    const Prediction p = s.model.predict(id, text);
    json out;
    switch (s.mode) {
      case Mode::server_error:
        res.status = 500;
        res.set_content(R"({"error":"internal"})", "application/json");
        return;
      case Mode::not_json:
        res.set_content("label=" + p.label.name, "text/plain");
        return;
      case Mode::no_label:
        out["prediction"] = p.label.name;
        break;
      case Mode::unknown_label:
        out["label"] = "neutral-" + p.label.name;
        break;
      case Mode::bad_probs:
        out["label"] = p.label.name;
        out["probs"] = "high";
        break;
      case Mode::no_trace:
        out["label"] = p.label.name;
        out["probs"] = p.probs;
        break;
      case Mode::ok:
        out["label"] = p.label.name;
        out["probs"] = p.probs;
        out["trace"] = s.model.trace(id, text).values;
        break;
    }
    res.set_content(out.dump(), "application/json");
  });
}

StubService::~StubService() { stop(); }

int StubService::start(const std::string& host, int port) {
  host_ = host;
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    port_ = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) throw Error("stub: cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void StubService::serve(const std::string& host, int port) {
  host_ = host;
  port_ = port;
  if (!impl_->server.listen(host, port)) throw Error("stub: cannot listen on " + endpoint());
}

void StubService::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

std::string StubService::endpoint() const { return "http://" + host_ + ":" + std::to_string(port_); }

}  // namespace sadet::stub
