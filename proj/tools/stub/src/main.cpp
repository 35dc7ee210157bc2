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

// Serves a trained model over the remote classifier protocol.
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "sadet/error.hpp"
#include "sadet/model_io.hpp"
#include "sadet/remote.hpp"
#include "sadet_stub/stub_service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sadet model stub service"};
  std::string model_path;
  std::string host = "127.0.0.1";
  int port = 8765;
  std::string mode = "ok";
  app.add_option("--model", model_path, "Model file written by 'sadet train'")->required();
  app.add_option("--host", host, "Bind address");
  app.add_option("--port", port, "Port");
  app.add_option("--mode", mode,
                 "ok, no_label, unknown_label, bad_probs, no_trace, not_json or server_error");
  CLI11_PARSE(app, argc, argv);

  try {
    const char* token = std::getenv(sadet::kRemoteTokenEnv);
    sadet::stub::StubService service(sadet::load_model(model_path), sadet::stub::mode_from_string(mode),
                                     token ? token : "");
    std::cerr << "serving " << model_path << " on http://" << host << ":" << port << "\n";
    service.serve(host, port);
  } catch (const sadet::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
