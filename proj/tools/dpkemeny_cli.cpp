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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpkemeny/config_io.hpp"
#include "dpkemeny/dpkemeny.hpp"

namespace {

using namespace dpkemeny;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

std::string join_order(const Ranking& r) {
  std::string s;
  for (const int item : r.to_order()) {
    if (!s.empty()) s += ',';
    s += std::to_string(item);
  }
  return s;
}

struct AggregateArgs {
  std::string input;
  std::string model = "none";
  std::string algorithm;
  double epsilon = 0.0;
  bool epsilon_set = false;
  double delta = 0.0;
  std::string mechanism;
  std::string base = "exact";
  double budget_constant = kDefaultBudgetConstant;
  std::uint64_t seed = 0;
  std::string transcript_path;
};

void run_aggregate(const AggregateArgs& args) {
  const Model model = parse_model(args.model);
  const Algorithm algorithm = parse_algorithm(args.algorithm);
  if (model_for(algorithm) != model)
    throw InputError("algorithm '" + args.algorithm + "' does not belong to model '" +
                     args.model + "'");
  if (model != Model::kNone && !args.epsilon_set)
    throw InputError("--epsilon is required for central and local models");
  if (!args.mechanism.empty()) {
    if (args.mechanism != "laplace" && args.mechanism != "gaussian")
      throw InputError("--mechanism must be laplace or gaussian");
    if (model != Model::kCentral)
      throw InputError("--mechanism applies to the central model only");
    if (args.mechanism == "laplace" && args.delta != 0.0)
      throw InputError("the Laplace mechanism requires delta = 0");
    if (args.mechanism == "gaussian" && args.delta == 0.0)
      throw InputError("the Gaussian mechanism requires delta > 0");
  }
  if (!args.transcript_path.empty() && model != Model::kLocal)
    throw InputError("--transcript applies to the local model only");

  const RankingProfile profile = read_profile_csv(args.input);
  const PairwiseWeights w = build_weights(profile);
  const BaseRanker base = parse_base_ranker(args.base);
  Rng rng(args.seed);

  std::ofstream transcript_file;
  TranscriptSink sink;
  if (!args.transcript_path.empty()) {
    transcript_file.open(args.transcript_path);
    if (!transcript_file)
      throw InputError("cannot open transcript file: " + args.transcript_path);
    sink = [&transcript_file](const QueryRecord& rec) {
      nlohmann::json line = {{"pair", {rec.j, rec.i}},
                             {"partition", rec.partition},
                             {"counter", rec.counter_value}};
      if (rec.estimate)
        line["estimate"] = *rec.estimate;
      else
        line["estimate"] = nullptr;
      transcript_file << line.dump() << "\n";
    };
  }

  AggregationResult result{Ranking::identity(profile.m()), 0.0, 0, false, args.seed};
  switch (algorithm) {
    case Algorithm::kExact:
      result = opt_bruteforce(w);
      result.seed = args.seed;
      break;
    case Algorithm::kKwikSort: {
      ExactOracle oracle(w);
      Rng pivot_rng(rng.next_u64());
      const Ranking ranking = *kwiksort(oracle, profile.m(), pivot_rng);
      result = AggregationResult{ranking, kemeny_cost(ranking, w),
                                 oracle.queries_used(), false, args.seed};
      break;
    }
    case Algorithm::kBorda: {
      const Ranking ranking = borda(w);
      result = AggregationResult{
          ranking, kemeny_cost(ranking, w),
          static_cast<long long>(profile.m()) * (profile.m() - 1) / 2, false,
          args.seed};
      break;
    }
    case Algorithm::kNoiseAll:
      result = reduce_noise_all(w, PrivacyBudget(args.epsilon, args.delta),
                                profile.n(), base, rng);
      break;
    case Algorithm::kDpKwikSort:
      result = dp_kwiksort(w, PrivacyBudget(args.epsilon, args.delta), profile.n(),
                           args.budget_constant, rng);
      break;
    case Algorithm::kLocalNoiseAll:
      if (args.delta != 0.0) throw InputError("the local model supports delta = 0 only");
      result = reduce_local_noise_all(profile, args.epsilon, base, rng);
      break;
    case Algorithm::kLdpKwikSort:
      if (args.delta != 0.0) throw InputError("the local model supports delta = 0 only");
      result = ldp_kwiksort(profile, args.epsilon, args.budget_constant, rng, {},
                            nullptr, sink);
      break;
  }

  std::cout << "ranking: " << join_order(result.ranking) << "\n"
            << "cost: " << format_double(result.cost) << "\n"
            << "queries_used: " << result.queries_used << "\n"
            << "fallback_used: " << (result.fallback_used ? "true" : "false") << "\n";
}

struct GenArgs {
  std::string model = "uniform";
  int m = 0;
  int n = 0;
  double phi = 1.0;
  std::uint64_t seed = 0;
  std::string output;
};

void run_gen(const GenArgs& args) {
  Rng rng(args.seed);
  if (args.model == "uniform") {
    write_profile_csv(args.output, uniform_profile(args.m, args.n, rng));
  } else if (args.model == "mallows") {
    write_profile_csv(args.output,
                      mallows_sample(Ranking::identity(args.m), args.phi, args.n, rng));
  } else {
    throw InputError("--model must be mallows or uniform");
  }
}

void run_oracle(const std::string& input) {
  const RankingProfile profile = read_profile_csv(input);
  const AggregationResult result = opt_bruteforce(build_weights(profile));
  std::cout << "ranking: " << join_order(result.ranking) << "\n"
            << "opt: " << format_double(result.cost) << "\n";
}

void run_experiment_cmd(const std::string& config_path) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  if (cfg.output.empty()) throw InputError("config: output path is required");
  write_results_csv(cfg.output, run_experiment(cfg));
}

struct LowerBoundArgs {
  int d = 0;
  int t = 0;
  int n = 5;
  int trials = 0;
  std::uint64_t seed = 0;
};

std::vector<int> random_sign_vector(int d, Rng& rng) {
  std::vector<int> x(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = rng.bernoulli(0.5) ? 1 : -1;
  return x;
}

int run_lowerbound_check(const LowerBoundArgs& args) {
  if (args.d < 1 || args.t < 1) throw InputError("--d and --t must be at least 1");
  if (args.trials < 1) throw InputError("--trials must be at least 1");
  if (args.n < 1) throw InputError("--n must be at least 1");
  Rng rng(args.seed);
  long long violations = 0;
  for (int trial = 0; trial < args.trials; ++trial) {
    std::vector<std::vector<int>> xs;
    for (int k = 0; k < args.n; ++k) xs.push_back(random_sign_vector(args.d, rng));
    const MarginalInstance instance(args.d, args.t, xs);

    const Ranking sigma = random_ranking(instance.items(), rng);
    const ObservationReport lower = check_observations(instance, sigma);
    if (!lower.lower_holds) {
      ++violations;
      nlohmann::json line = {{"trial", trial},
                             {"check", "lower"},
                             {"sigma_positions", sigma.positions()},
                             {"x_vectors", xs},
                             {"lhs", lower.mean_kendall},
                             {"rhs", lower.lower_rhs}};
      std::cout << line.dump() << "\n";
    }

    const std::vector<int> y = random_sign_vector(args.d, rng);
    const Ranking embedded = embed_pi(y, args.d, args.t);
    const ObservationReport both = check_observations(instance, embedded, y);
    if (!both.lower_holds || !both.upper_holds) {
      ++violations;
      nlohmann::json line = {{"trial", trial},
                             {"check", "embedded"},
                             {"y", y},
                             {"x_vectors", xs},
                             {"lhs", both.mean_kendall},
                             {"lower_rhs", both.lower_rhs},
                             {"upper_rhs", both.upper_rhs}};
      std::cout << line.dump() << "\n";
    }
  }
  nlohmann::json summary = {{"d", args.d},       {"t", args.t},
                            {"n", args.n},       {"trials", args.trials},
                            {"violations", violations}, {"pass", violations == 0}};
  std::cout << summary.dump() << "\n";
  return violations == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private Kemeny rank aggregation"};
  app.require_subcommand(1);

  AggregateArgs agg;
  CLI::App* aggregate = app.add_subcommand(
      "aggregate", "Aggregate a ranking profile into a single ranking");
  aggregate->add_option("--input", agg.input, "Profile CSV")->required();
  aggregate->add_option("--model", agg.model, "central|local|none")->required();
  aggregate->add_option("--algorithm", agg.algorithm,
                        "dpkwiksort|noiseall|ldpkwiksort|localnoiseall|exact|kwiksort|borda")
      ->required();
  CLI::Option* eps_opt = aggregate->add_option("--epsilon", agg.epsilon, "Privacy budget");
  aggregate->add_option("--delta", agg.delta, "Approximate-DP delta (default 0)");
  aggregate->add_option("--mechanism", agg.mechanism, "laplace|gaussian (central only)");
  aggregate->add_option("--base", agg.base, "Base ranker for noise-all reductions");
  aggregate->add_option("--budget-constant", agg.budget_constant,
                        "Query budget constant (default 8)");
  aggregate->add_option("--seed", agg.seed, "RNG seed (default 0)");
  aggregate->add_option("--transcript", agg.transcript_path,
                        "Write a JSONL query transcript (local model)");

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic profile CSV");
  gen_cmd->add_option("--model", gen.model, "mallows|uniform")->required();
  gen_cmd->add_option("--m", gen.m, "Item count")->required();
  gen_cmd->add_option("--n", gen.n, "Voter count")->required();
  gen_cmd->add_option("--phi", gen.phi, "Mallows dispersion in (0,1]");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed")->required();
  gen_cmd->add_option("--output", gen.output, "Output CSV path")->required();

  std::string experiment_config;
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "Run a configured experiment sweep");
  experiment_cmd->add_option("--config", experiment_config, "JSON config path")
      ->required();

  std::string oracle_input;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Exact Kemeny ranking and OPT (m <= 10)");
  oracle_cmd->add_option("--input", oracle_input, "Profile CSV")->required();

  LowerBoundArgs lb;
  CLI::App* lb_cmd = app.add_subcommand(
      "lowerbound-check", "Randomized checks of the marginal-embedding bounds");
  lb_cmd->add_option("--d", lb.d, "Sign-vector dimension")->required();
  lb_cmd->add_option("--t", lb.t, "Fixed middle-block length")->required();
  lb_cmd->add_option("--n", lb.n, "Vectors per instance (default 5)");
  lb_cmd->add_option("--trials", lb.trials, "Number of random instances")->required();
  lb_cmd->add_option("--seed", lb.seed, "RNG seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInput;
  }

  try {
    if (aggregate->parsed()) {
      agg.epsilon_set = eps_opt->count() > 0;
      run_aggregate(agg);
      return kExitOk;
    }
    if (gen_cmd->parsed()) {
      run_gen(gen);
      return kExitOk;
    }
    if (experiment_cmd->parsed()) {
      run_experiment_cmd(experiment_config);
      return kExitOk;
    }
    if (oracle_cmd->parsed()) {
      run_oracle(oracle_input);
      return kExitOk;
    }
    if (lb_cmd->parsed()) {
      return run_lowerbound_check(lb);
    }
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitInput;
}
