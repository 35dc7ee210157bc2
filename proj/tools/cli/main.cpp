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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sadet/error.hpp"
#include "sadet/pipeline.hpp"
#include "sadet/remote.hpp"
#include "sadet/synth.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  bool force = false;
  std::vector<std::string> variants;
  std::vector<std::size_t> typos;
  std::optional<std::string> endpoint;
  std::optional<std::string> train;
  std::optional<std::string> test;
  std::optional<std::string> output;
  std::optional<std::string> model;
  bool contractions = false;
};

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("-c,--config", f.config, "JSON config file");
  cmd.add_option("--seed", f.seed, "Global seed");
  cmd.add_option("-j,--jobs", f.jobs, "Worker threads");
  cmd.add_flag("-f,--force", f.force, "Overwrite existing outputs");
  cmd.add_option("--variant", f.variants, "DSA variant (repeatable): DSA0, DSA1, DSA2, DSA3");
  cmd.add_option("--typos", f.typos, "Typo counts, e.g. --typos 1,2,3")->delimiter(',');
  cmd.add_option("--endpoint", f.endpoint,
                 std::string("Remote model endpoint; token read from $") + sadet::kRemoteTokenEnv);
  cmd.add_option("--train", f.train, "Training set (.csv or .jsonl)");
  cmd.add_option("--test", f.test, "Test set (.csv or .jsonl)");
  cmd.add_option("-o,--output", f.output, "Output directory");
  cmd.add_option("--model", f.model, "Model file (default: <output>/model.json)");
  cmd.add_flag("--contractions", f.contractions, "Add the contraction channel");
}

sadet::RunConfig build_config(const Flags& f) {
  sadet::RunConfig c = f.config.empty() ? sadet::RunConfig{} : sadet::load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.jobs) c.jobs = *f.jobs;
  c.force = f.force;
  if (!f.variants.empty()) {
    c.dsa.variants.clear();
    for (const auto& v : f.variants) {
      try {
        c.dsa.variants.push_back(sadet::dsa_variant_from_string(v));
      } catch (const sadet::Error& e) {
        throw sadet::ConfigError(std::string("--variant: ") + e.what());
      }
    }
  }
  if (!f.typos.empty()) c.perturb.typo_counts = f.typos;
  if (f.contractions) c.perturb.use_contractions = true;
  if (f.endpoint) {
    c.classifier.kind = sadet::ClassifierConfig::Kind::remote;
    c.classifier.endpoint = *f.endpoint;
  }
  if (f.train) c.train = *f.train;
  if (f.test) c.test = *f.test;
  if (f.output) c.output_dir = *f.output;
  if (f.model) c.model = *f.model;
  return c;
}

int report(const sadet::CommandResult& result) {
  for (const auto& p : result.outputs) std::cout << p.string() << "\n";
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  return result.warnings.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sadet: adversarial review generation and surprise-adequacy detection"};
  app.set_version_flag("--version", std::string(sadet::version()));
  app.require_subcommand(1);

  Flags flags;
  using Command = sadet::CommandResult (*)(const sadet::RunConfig&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"train", "Train the builtin classifier", sadet::cmd_train},
      {"attack", "Generate typo (and contraction) adversarial records", sadet::cmd_attack},
      {"score", "Trace inputs and write DSA scores per variant", sadet::cmd_score},
      {"report", "Evaluate scores: ASR, AUC, ROC and length statistics", sadet::cmd_report},
      {"run", "train, attack, score and report in sequence", sadet::cmd_run},
  };
  std::optional<Command> selected;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(*cmd, flags);
    cmd->callback([&selected, fn = fn] { selected = fn; });
  }

  std::size_t synth_n = 2000;
  std::uint64_t synth_seed = 0;
  std::string synth_split = "train";
  std::string synth_out;
  bool synth_force = false;
  CLI::App* synth = app.add_subcommand("synth", "Write a seeded synthetic review corpus");
  synth->add_option("-n,--count", synth_n, "Number of reviews");
  synth->add_option("--seed", synth_seed, "Seed");
  synth->add_option("--split", synth_split, "train or test")->check(CLI::IsMember({"train", "test"}));
  synth->add_option("-o,--output", synth_out, "Output file (.csv or .jsonl)")->required();
  synth->add_flag("-f,--force", synth_force, "Overwrite an existing file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) {
      if (!synth_force && std::filesystem::exists(synth_out)) {
        throw sadet::ConfigError("refusing to overwrite " + synth_out + " (use --force)");
      }
      const auto split = synth_split == "train" ? sadet::Split::train : sadet::Split::test;
      const auto data = sadet::generate_review_corpus(synth_n, synth_seed, split);
      std::ofstream out(synth_out, std::ios::binary | std::ios::trunc);
      if (!out) throw sadet::Error("cannot write " + synth_out);
      sadet::write_dataset(out, data, sadet::format_from_path(synth_out));
      std::cout << synth_out << "\n";
      return 0;
    }
    return report((*selected)(build_config(flags)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sadet::exit_code_for(e);
  }
}
