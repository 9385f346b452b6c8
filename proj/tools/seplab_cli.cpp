// Copyright 2026 The seplab Authors
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

// Command-line front end. Talks to the library only through the C API.
//
//   seplab sweep --config sweep.json --out curve.csv [--seed 7] [--format csv]
//
// Exit codes: 0 success, 1 a configured assertion failed, 2 config/I/O error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "seplab/seplab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitChecks = 1;
constexpr int kExitError = 2;

struct RunArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format;
};

int ReportError(const char* what) {
  std::cerr << "seplab: " << what << ": " << seplab_last_error() << "\n";
  return kExitError;
}

std::string GuessFormat(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".json") return "json";
  return "csv";
}

int Run(const std::string& kind, const RunArgs& args) {
  seplab_config* config = nullptr;
  if (seplab_config_load(args.config.c_str(), &config) != SEPLAB_OK)
    return ReportError("loading config");
  if (args.seed) seplab_config_set_seed(config, *args.seed);

  std::string out = args.out;
  if (out.empty() && seplab_config_output(config))
    out = seplab_config_output(config);
  std::string format = args.format;
  if (format.empty() && seplab_config_format(config))
    format = seplab_config_format(config);
  if (format.empty()) format = out.empty() ? "csv" : GuessFormat(out);

  seplab_report* report = nullptr;
  const seplab_status st = seplab_run(config, kind.c_str(), &report);
  seplab_config_free(config);
  if (st != SEPLAB_OK) return ReportError(kind.c_str());

  int code = kExitOk;
  if (out.empty() || out == "-") {
    char* text = nullptr;
    if (seplab_report_render(report, format.c_str(), &text) != SEPLAB_OK) {
      code = ReportError("rendering report");
    } else {
      std::fputs(text, stdout);
      seplab_string_free(text);
    }
  } else if (seplab_report_write(report, out.c_str(), format.c_str()) !=
             SEPLAB_OK) {
    code = ReportError("writing report");
  }
  if (code == kExitOk && !seplab_report_checks_passed(report)) {
    for (size_t i = 0; i < seplab_report_failure_count(report); ++i)
      std::cerr << "check failed: " << seplab_report_failure(report, i) << "\n";
    code = kExitChecks;
  }
  seplab_report_free(report);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seplab: sparse signal separation experiments"};
  app.set_version_flag("--version", std::string(seplab_version()));
  app.require_subcommand(1);

  RunArgs args;
  const char* kinds[][2] = {
      {"sweep", "success rate against k for a separation problem"},
      {"declip", "declipping run with clip-count support model"},
      {"concentration", "small-ball probabilities against the bound"},
      {"dimension", "box-counting slope and covering numbers"},
      {"uncertainty", "classical uncertainty principle checks"}};
  for (const auto& kind : kinds) {
    CLI::App* sub = app.add_subcommand(kind[0], kind[1]);
    sub->add_option("--config", args.config, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output path ('-' for stdout)");
    sub->add_option("--seed", args.seed, "override the master seed");
    sub->add_option("--format", args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  return Run(app.get_subcommands().front()->get_name(), args);
}
