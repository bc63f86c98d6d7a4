// Copyright 2026 The dpkemeny Authors
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

#include <fstream>
#include <string>

#include <json.hpp>

#include "dpkemeny/errors.hpp"
#include "dpkemeny/experiment.hpp"

namespace dpkemeny {

inline Model parse_model(const std::string& s) {
  if (s == "none") return Model::kNone;
  if (s == "central") return Model::kCentral;
  if (s == "local") return Model::kLocal;
  throw InputError("unknown model '" + s + "' (expected none|central|local)");
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "exact") return Algorithm::kExact;
  if (s == "kwiksort") return Algorithm::kKwikSort;
  if (s == "borda") return Algorithm::kBorda;
  if (s == "noiseall") return Algorithm::kNoiseAll;
  if (s == "dpkwiksort") return Algorithm::kDpKwikSort;
  if (s == "localnoiseall") return Algorithm::kLocalNoiseAll;
  if (s == "ldpkwiksort") return Algorithm::kLdpKwikSort;
  throw InputError("unknown algorithm '" + s + "'");
}

inline BaseRanker parse_base_ranker(const std::string& s) {
  if (s == "exact") return BaseRanker::kExact;
  if (s == "kwiksort") return BaseRanker::kKwikSort;
  if (s == "borda") return BaseRanker::kBorda;
  throw InputError("unknown base ranker '" + s + "' (expected exact|kwiksort|borda)");
}

inline ProfileModel parse_profile_model(const std::string& s) {
  if (s == "uniform") return ProfileModel::kUniform;
  if (s == "mallows") return ProfileModel::kMallows;
  throw InputError("unknown profile model '" + s + "' (expected uniform|mallows)");
}

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  try {
    ExperimentConfig cfg;
    cfg.m = j.at("m").get<int>();
    cfg.n_grid = j.at("n_grid").get<std::vector<int>>();
    if (j.contains("epsilon_grid"))
      cfg.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
    cfg.delta = j.value("delta", 0.0);
    cfg.model = parse_model(j.at("model").get<std::string>());
    cfg.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    cfg.base = parse_base_ranker(j.value("base", std::string("exact")));
    cfg.trials = j.at("trials").get<int>();
    cfg.budget_constant = j.value("budget_constant", kDefaultBudgetConstant);
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.output = j.value("output", std::string());
    if (j.contains("profile")) {
      const nlohmann::json& p = j.at("profile");
      cfg.profile_model = parse_profile_model(p.value("model", std::string("uniform")));
      cfg.phi = p.value("phi", 1.0);
    }
    cfg.compute_opt = j.value("compute_opt", true);
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return parse_experiment_config(j);
}

}  // namespace dpkemeny
