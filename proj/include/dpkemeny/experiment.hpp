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

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dpkemeny/base_rankers.hpp"
#include "dpkemeny/central_dp.hpp"
#include "dpkemeny/errors.hpp"
#include "dpkemeny/local_dp.hpp"
#include "dpkemeny/ranking.hpp"
#include "dpkemeny/rng.hpp"
#include "dpkemeny/sampling.hpp"

namespace dpkemeny {

enum class Model { kNone, kCentral, kLocal };
enum class Algorithm {
  kExact,
  kKwikSort,
  kBorda,
  kNoiseAll,
  kDpKwikSort,
  kLocalNoiseAll,
  kLdpKwikSort
};
enum class ProfileModel { kUniform, kMallows };

inline const char* to_string(Model model) {
  switch (model) {
    case Model::kNone: return "none";
    case Model::kCentral: return "central";
    case Model::kLocal: return "local";
  }
  return "?";
}

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kExact: return "exact";
    case Algorithm::kKwikSort: return "kwiksort";
    case Algorithm::kBorda: return "borda";
    case Algorithm::kNoiseAll: return "noiseall";
    case Algorithm::kDpKwikSort: return "dpkwiksort";
    case Algorithm::kLocalNoiseAll: return "localnoiseall";
    case Algorithm::kLdpKwikSort: return "ldpkwiksort";
  }
  return "?";
}

inline Model model_for(Algorithm a) {
  switch (a) {
    case Algorithm::kExact:
    case Algorithm::kKwikSort:
    case Algorithm::kBorda:
      return Model::kNone;
    case Algorithm::kNoiseAll:
    case Algorithm::kDpKwikSort:
      return Model::kCentral;
    case Algorithm::kLocalNoiseAll:
    case Algorithm::kLdpKwikSort:
      return Model::kLocal;
  }
  return Model::kNone;
}

struct ExperimentConfig {
  int m = 5;
  std::vector<int> n_grid;
  std::vector<double> epsilon_grid;
  double delta = 0.0;
  Model model = Model::kNone;
  Algorithm algorithm = Algorithm::kExact;
  BaseRanker base = BaseRanker::kExact;
  int trials = 1;
  double budget_constant = kDefaultBudgetConstant;
  std::uint64_t master_seed = 0;
  std::string output;
  ProfileModel profile_model = ProfileModel::kUniform;
  double phi = 1.0;
  bool compute_opt = true;

  void validate() const {
    if (m < 1) throw InputError("config: m must be at least 1");
    if (n_grid.empty()) throw InputError("config: n_grid must be nonempty");
    for (const int n : n_grid)
      if (n < 1) throw InputError("config: every n must be at least 1");
    if (trials < 1) throw InputError("config: trials must be at least 1");
    if (model != model_for(algorithm))
      throw InputError(std::string("config: algorithm '") + to_string(algorithm) +
                       "' does not belong to model '" + to_string(model) + "'");
    if (model != Model::kNone) {
      if (epsilon_grid.empty())
        throw InputError("config: epsilon_grid must be nonempty for DP models");
      for (const double e : epsilon_grid)
        if (!(e > 0.0)) throw InputError("config: epsilon values must be positive");
    }
    if (delta < 0.0 || delta >= 1.0) throw InputError("config: delta must lie in [0, 1)");
    if (model == Model::kLocal && delta != 0.0)
      throw InputError("config: the local model supports delta = 0 only");
    if (!(budget_constant > 0.0))
      throw InputError("config: budget_constant must be positive");
    if (compute_opt && m > 10)
      throw InputError("config: exact OPT (compute_opt) requires m <= 10");
    if (profile_model == ProfileModel::kMallows && (!(phi > 0.0) || phi > 1.0))
      throw InputError("config: phi must lie in (0, 1]");
  }
};

struct ResultRow {
  int m = 0;
  int n = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::string model;
  std::string algorithm;
  int trial = 0;
  double cost = 0.0;
  std::optional<double> opt;
  std::optional<double> additive_error;
  std::optional<double> ratio;
  long long queries_used = 0;
  bool fallback_used = false;
  std::uint64_t seed = 0;
};

namespace detail {

inline RankingProfile generate_profile(const ExperimentConfig& cfg, int n, Rng& rng) {
  switch (cfg.profile_model) {
    case ProfileModel::kUniform:
      return uniform_profile(cfg.m, n, rng);
    case ProfileModel::kMallows:
      return mallows_sample(Ranking::identity(cfg.m), cfg.phi, n, rng);
  }
  throw InputError("unknown profile model");
}

inline AggregationResult run_algorithm(const ExperimentConfig& cfg,
                                       const RankingProfile& profile,
                                       const PairwiseWeights& w, double epsilon,
                                       Rng& rng) {
  switch (cfg.algorithm) {
    case Algorithm::kExact: {
      AggregationResult r = opt_bruteforce(w);
      r.seed = rng.seed();
      return r;
    }
    case Algorithm::kKwikSort: {
      ExactOracle oracle(w);
      Rng pivot_rng(rng.next_u64());
      const Ranking ranking = *kwiksort(oracle, cfg.m, pivot_rng);
      return AggregationResult{ranking, kemeny_cost(ranking, w),
                               oracle.queries_used(), false, rng.seed()};
    }
    case Algorithm::kBorda: {
      const Ranking ranking = borda(w);
      return AggregationResult{ranking, kemeny_cost(ranking, w),
                               static_cast<long long>(cfg.m) * (cfg.m - 1) / 2, false,
                               rng.seed()};
    }
    case Algorithm::kNoiseAll:
      return reduce_noise_all(w, PrivacyBudget(epsilon, cfg.delta), profile.n(),
                              cfg.base, rng);
    case Algorithm::kDpKwikSort:
      return dp_kwiksort(w, PrivacyBudget(epsilon, cfg.delta), profile.n(),
                         cfg.budget_constant, rng);
    case Algorithm::kLocalNoiseAll:
      return reduce_local_noise_all(profile, epsilon, cfg.base, rng);
    case Algorithm::kLdpKwikSort:
      return ldp_kwiksort(profile, epsilon, cfg.budget_constant, rng);
  }
  throw InputError("unknown algorithm");
}

}  // namespace detail

// Runs the full grid. Rows come out sorted by (grid point, trial); the
// per-trial seed is derived from (master seed, grid index, trial), so any
// grid point can be recomputed on its own.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> eps_grid =
      cfg.model == Model::kNone && cfg.epsilon_grid.empty() ? std::vector<double>{0.0}
                                                            : cfg.epsilon_grid;
  std::vector<ResultRow> rows;
  rows.reserve(cfg.n_grid.size() * eps_grid.size() *
               static_cast<std::size_t>(cfg.trials));
  std::uint64_t grid_index = 0;
  for (const int n : cfg.n_grid) {
    for (const double epsilon : eps_grid) {
      for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t seed =
            derive_seed(cfg.master_seed, {grid_index, static_cast<std::uint64_t>(trial)});
        Rng rng(seed);
        Rng profile_rng(rng.next_u64());
        const RankingProfile profile = detail::generate_profile(cfg, n, profile_rng);
        const PairwiseWeights w = build_weights(profile);
        const AggregationResult result =
            detail::run_algorithm(cfg, profile, w, epsilon, rng);

        ResultRow row;
        row.m = cfg.m;
        row.n = n;
        row.epsilon = epsilon;
        row.delta = cfg.delta;
        row.model = to_string(cfg.model);
        row.algorithm = to_string(cfg.algorithm);
        row.trial = trial;
        row.cost = result.cost;
        if (cfg.compute_opt) {
          const double opt = opt_bruteforce(w).cost;
          row.opt = opt;
          row.additive_error = result.cost - opt;
          if (opt > 0.0) row.ratio = result.cost / opt;
        }
        row.queries_used = result.queries_used;
        row.fallback_used = result.fallback_used;
        row.seed = seed;
        rows.push_back(std::move(row));
      }
      ++grid_index;
    }
  }
  return rows;
}

// Shortest-round-trip decimal form, so re-runs are byte-identical.
inline std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

inline constexpr const char* kResultCsvHeader =
    "m,n,epsilon,delta,model,algorithm,trial,cost,opt,additive_error,ratio,"
    "queries_used,fallback_used,seed";

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultCsvHeader << "\n";
  for (const ResultRow& r : rows) {
    out << r.m << ',' << r.n << ',' << format_double(r.epsilon) << ','
        << format_double(r.delta) << ',' << r.model << ',' << r.algorithm << ','
        << r.trial << ',' << format_double(r.cost) << ','
        << (r.opt ? format_double(*r.opt) : std::string()) << ','
        << (r.additive_error ? format_double(*r.additive_error) : std::string()) << ','
        << (r.ratio ? format_double(*r.ratio) : std::string()) << ','
        << r.queries_used << ',' << (r.fallback_used ? "true" : "false") << ','
        << r.seed << "\n";
  }
}

inline void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  write_results_csv(out, rows);
}

}  // namespace dpkemeny
