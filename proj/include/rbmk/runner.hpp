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

#pragma once

#include <filesystem>
#include <string>

#include "rbmk/config.hpp"
#include "rbmk/output.hpp"

namespace rbmk {

std::string version();

// Builds the time-stationary noise model a config describes (no DD).
NoiseModel build_noise_model(const RBExperimentConfig& cfg);

// Runs the experiment and returns the files it would write. summary.json
// includes wall_time_s and is therefore the only non-reproducible artifact.
ArtifactBundle run_to_bundle(const RBExperimentConfig& cfg, int threads);

// Runs and commits the bundle into `out_dir` (or cfg.output_dir when empty).
std::filesystem::path run_experiment(const RBExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                     int threads);

}  // namespace rbmk
