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

#include "rbmk/config.hpp"

#include <gtest/gtest.h>

#include "rbmk/errors.hpp"
#include "test_util.hpp"

using namespace rbmk;
using namespace rbmk::testing;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kPaper = R"({
  "kind": "nonmarkov",
  "model": {"type": "paper", "j": 1.7, "hx": 1.47, "hy": -1.05, "gamma0": 0.002, "gamma1": 0.007},
  "tau_rb": 0.03,
  "m_list": {"start": 1, "stop": 50, "step": 7},
  "n_samples": 40,
  "seed": 11,
  "rho_E": "+",
  "rho_S": "0",
  "M": "0"
})";

}  // namespace

TEST(config, parses_paper_config) {
  auto cfg = parse_config(kPaper);
  ASSERT_EQ(cfg.kind, ExperimentKind::NonMarkov);
  ASSERT_TRUE(cfg.model.paper);
  ASSERT_DOUBLE_EQ(cfg.model.params.hy, -1.05);
  ASSERT_EQ(cfg.m_list, (std::vector<int>{1, 8, 15, 22, 29, 36, 43, 50}));
  ASSERT_EQ(cfg.n_samples, 40);
  ASSERT_EQ(cfg.seed, 11u);
  ASSERT_TRUE(approx_equal(cfg.rho_env, ComplexMatrix::Constant(2, 2, 0.5), 1e-15));
  ASSERT_TRUE(approx_equal(cfg.measurement, ket0(), 0));
  ASSERT_TRUE(cfg.needs_samples());
  ASSERT_EQ(cfg.echo["seed"], 11);
}

TEST(config, defaults) {
  auto cfg = parse_config(R"({"kind": "rc-mean", "model": {"type": "paper", "j": 1, "hx": 0, "hy": 0,
    "gamma0": 0, "gamma1": 0}, "tau_rb": 0.01, "m_list": [1, 2, 3], "seed": 0})");
  ASSERT_TRUE(approx_equal(cfg.rho_env, ket0(), 0));
  ASSERT_TRUE(approx_equal(cfg.rho_sys, ket0(), 0));
  ASSERT_EQ(cfg.combos.size(), 4u);
  ASSERT_FALSE(cfg.needs_samples());
}

TEST(config, channel_models) {
  auto cfg = parse_config(R"({"kind": "markov", "model": {"type": "depolarizing", "lambda": 0.9},
    "m_list": [1, 2, 3], "n_samples": 2, "seed": 1})");
  ASSERT_FALSE(cfg.model.paper);
  ASSERT_NEAR(quality_factor(cfg.model.channel.build()), 0.9, 1e-14);
}

TEST(config, reports_every_problem_with_its_line) {
  const std::string err = error_of(R"({
  "kind": "nonmarkov",
  "model": {"type": "paper", "j": 1, "hx": 0, "hy": 0, "gamma0": -1, "gamma1": 0},
  "tau_rb": -0.5,
  "m_list": [3, 2],
  "n_samples": 1,
  "seed": 1,
  "colour": "red"
})");
  EXPECT_NE(err.find("cfg.json:8: unknown field 'colour'"), std::string::npos) << err;
  EXPECT_NE(err.find("cfg.json:4: tau_rb must be positive"), std::string::npos) << err;
  EXPECT_NE(err.find("cfg.json:5: m_list must be strictly increasing"), std::string::npos) << err;
  EXPECT_NE(err.find("cfg.json:6: n_samples must be an integer >= 2"), std::string::npos) << err;
  EXPECT_NE(err.find("gamma0 must be non-negative"), std::string::npos) << err;
}

TEST(config, parse_errors_carry_a_line) {
  const std::string err = error_of("{\n \"kind\": \"markov\",\n \"m_list\": [1,,2]\n}");
  ASSERT_EQ(err.rfind("cfg.json:3:", 0), 0u) << err;
}

TEST(config, kind_requirements) {
  EXPECT_NE(error_of(R"({"kind": "dd", "model": {"type": "depolarizing", "lambda": 0.9},
    "m_list": [1], "n_samples": 4, "seed": 1, "tau_dd": 0.1})")
                .find("requires model type 'paper'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"kind": "delta-scan", "model": {"type": "paper", "j": 1, "hx": 0, "hy": 0,
    "gamma0": 0, "gamma1": 0}, "tau_rb": 0.1, "m_list": [1], "seed": 1})")
                .find("tau_dd_grid"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"kind": "teleport"})").find("unknown kind"), std::string::npos);
  EXPECT_NE(error_of(R"({"kind": "markov", "model": {"type": "depolarizing", "lambda": 0.9},
    "m_list": [1], "n_samples": 4, "seed": 1, "rho_S": {"re": [[1, 0], [0, 1]]}})")
                .find("unit trace"),
            std::string::npos);
  EXPECT_NE(error_of("[1, 2]").find("JSON object"), std::string::npos);
}

TEST(config, operator_specs) {
  ASSERT_TRUE(approx_equal(parse_operator_spec("1", 2), basis_projector(2, 1), 0));
  ASSERT_TRUE(approx_equal(parse_operator_spec("mixed", 2), ComplexMatrix::Identity(2, 2) / 2, 0));
  ComplexMatrix plus_i = parse_operator_spec("+i", 2);
  ASSERT_NEAR(plus_i(0, 1).imag(), -0.5, 1e-15);
  nlohmann::ordered_json explicit_op = {{"re", {{0.5, 0}, {0, 0.5}}}};
  ASSERT_TRUE(approx_equal(parse_operator_spec(explicit_op, 2), ComplexMatrix::Identity(2, 2) / 2, 0));
  ASSERT_THROW(parse_operator_spec("bogus", 2), ConfigError);
}

TEST(config, load_missing_file) { ASSERT_THROW(load_config("/nonexistent/rbmk.json"), IoError); }
