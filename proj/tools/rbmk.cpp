// Copyright 2026 The rbmk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rbmk/errors.hpp"
#include "rbmk/gates.hpp"
#include "rbmk/runner.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("RBMK_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "rbmk: ignoring invalid RBMK_THREADS='" << env << "'\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized benchmarking under non-Markovian noise"};
  app.set_version_flag("--version", rbmk::version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run an experiment and write its artifact bundle");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--threads", threads, "Worker threads (default: RBMK_THREADS or 1)")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a config");
  validate->add_option("--config", validate_path, "Experiment config (JSON)")->required();

  std::string fixture_path;
  auto* fixtures = app.add_subcommand("fixtures", "Write the canonical Clifford fixture");
  fixtures->add_option("--out", fixture_path, "Destination file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) {
      const auto cfg = rbmk::load_config(config_path);
      const auto dir = rbmk::run_experiment(cfg, out_dir, resolve_threads(threads));
      std::cout << "wrote " << dir.string() << "\n";
    } else if (*validate) {
      const auto cfg = rbmk::load_config(validate_path);
      std::cout << validate_path << ": ok (kind " << rbmk::to_string(cfg.kind) << ", " << cfg.m_list.size()
                << " sequence lengths)\n";
    } else if (*fixtures) {
      if (fixture_path.empty()) {
        rbmk::write_clifford_fixture(std::cout);
      } else {
        std::ofstream f(fixture_path);
        rbmk::write_clifford_fixture(f);
        f.close();
        if (!f) throw std::ios_base::failure("cannot write '" + fixture_path + "'");
      }
    }
  } catch (const rbmk::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const rbmk::InvariantError& e) {
    std::cerr << "rbmk: invariant violated: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const rbmk::RepresentationError& e) {
    std::cerr << "rbmk: channels: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const rbmk::StructureError& e) {
    std::cerr << "rbmk: structure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const rbmk::DimensionError& e) {
    std::cerr << "rbmk: dimensions: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "rbmk: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "rbmk: " << e.what() << "\n";
    return kExitIo;
  } catch (const rbmk::IoError& e) {
    std::cerr << "rbmk: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::runtime_error& e) {
    std::cerr << "rbmk: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "rbmk: invalid input: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
