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

// End-to-end acceptance suite. Each test prints one PASS/FAIL line; run the
// binary directly to see them, or via ctest.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gtest/gtest.h"

#include "dpkemeny/dpkemeny.hpp"
#include "test_util.hpp"

namespace dpkemeny {
namespace {

namespace fs = std::filesystem;
using testing::example_office_profile;
using testing::kendall_tau_bruteforce;

struct CriterionReporter {
  int number;
  const char* label;
  ~CriterionReporter() {
    std::printf("[CRITERION %2d] %s - %s\n", number,
                ::testing::Test::HasFailure() ? "FAIL" : "PASS", label);
    std::fflush(stdout);
  }
};

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t k = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

// A perfectly tied identity/reverse block plus a handful of uniform voters:
// every pair margin is a small integer over n, the same scale as the
// per-query noise, so additive error tracks 1/n cleanly.
RankingProfile near_tied_profile(int m, int n, int extras, Rng& rng) {
  std::vector<Ranking> rankings;
  rankings.reserve(static_cast<std::size_t>(n));
  const int base = n - extras;
  for (int i = 0; i < base / 2; ++i) rankings.push_back(Ranking::identity(m));
  for (int i = 0; i < base - base / 2; ++i) rankings.push_back(Ranking::reversed(m));
  for (int i = 0; i < extras; ++i) rankings.push_back(random_ranking(m, rng));
  return RankingProfile(std::move(rankings));
}

std::vector<int> random_signs(int d, Rng& rng) {
  std::vector<int> x(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = rng.bernoulli(0.5) ? 1 : -1;
  return x;
}

// --- CLI plumbing -----------------------------------------------------------

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DPKEMENY_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliResult result;
  if (!pipe) return result;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe)) result.out += buf;
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() /
                 ("dpkemeny_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

// --- Criteria ---------------------------------------------------------------

TEST(Acceptance, Criterion01_KendallTauExactness) {
  CriterionReporter report{1, "kendall tau exact vs brute count + metric axioms"};
  // The worked example: positions (1,2,3,4) vs (2,3,1,4) disagree twice.
  ASSERT_EQ(kendall_tau(Ranking::from_positions({0, 1, 2, 3}),
                        Ranking::from_positions({1, 2, 0, 3})),
            2);
  Rng rng(20260101);
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform_index(8));
    const Ranking a = random_ranking(m, rng);
    const Ranking b = random_ranking(m, rng);
    ASSERT_EQ(kendall_tau(a, b), kendall_tau_bruteforce(a, b));
  }
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 2 + static_cast<int>(rng.uniform_index(7));
    const Ranking a = random_ranking(m, rng);
    const Ranking b = random_ranking(m, rng);
    const Ranking c = random_ranking(m, rng);
    const long long ab = kendall_tau(a, b);
    ASSERT_GE(ab, 0);
    ASSERT_EQ(ab, kendall_tau(b, a));
    ASSERT_EQ(ab == 0, a == b);
    ASSERT_LE(ab, kendall_tau(a, c) + kendall_tau(c, b));
  }
}

TEST(Acceptance, Criterion02_CostDifferenceBoundExact) {
  CriterionReporter report{
      2, "cost-vs-weights perturbation bound, exact rational arithmetic"};
  Rng rng(20260202);
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 2 + static_cast<int>(rng.uniform_index(6));
    const long long den_a = 1 + static_cast<long long>(rng.uniform_index(20));
    const long long den_b = 1 + static_cast<long long>(rng.uniform_index(20));
    // Integer-numerator weight matrices w = a/den_a, wt = b/den_b with
    // a_ij + a_ji = den_a (probability constraint holds exactly).
    std::vector<std::vector<long long>> a(static_cast<std::size_t>(m),
                                          std::vector<long long>(static_cast<std::size_t>(m), 0));
    std::vector<std::vector<long long>> b = a;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        a[i][j] = static_cast<long long>(rng.uniform_index(static_cast<std::uint64_t>(den_a) + 1));
        a[j][i] = den_a - a[i][j];
        b[i][j] = static_cast<long long>(rng.uniform_index(static_cast<std::uint64_t>(den_b) + 1));
        b[j][i] = den_b - b[i][j];
      }
    const Ranking sigma = random_ranking(m, rng);
    // Cost numerators over den_a and den_b respectively.
    long long cost_a = 0, cost_b = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (i == j || !sigma.prefers(i, j)) continue;
        cost_a += a[j][i];
        cost_b += b[j][i];
      }
    // |cost_a/den_a - cost_b/den_b| <= sum |a_ji/den_a - b_ji/den_b|,
    // scaled by den_a*den_b into pure integers.
    const long long lhs = std::llabs(cost_a * den_b - cost_b * den_a);
    long long rhs = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) rhs += std::llabs(a[j][i] * den_b - b[j][i] * den_a);
    ASSERT_LE(lhs, rhs);

    // The floating-point implementation agrees with the rational route.
    PairwiseWeights wa(m), wb(m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        wa.set_pair(i, j, static_cast<double>(a[i][j]) / static_cast<double>(den_a));
        wb.set_pair(i, j, static_cast<double>(b[i][j]) / static_cast<double>(den_b));
      }
    ASSERT_NEAR(kemeny_cost(sigma, wa),
                static_cast<double>(cost_a) / static_cast<double>(den_a), 1e-12);
    ASSERT_NEAR(kemeny_cost(sigma, wb),
                static_cast<double>(cost_b) / static_cast<double>(den_b), 1e-12);
  }
}

TEST(Acceptance, Criterion03_KwikSortApproximation) {
  CriterionReporter report{3, "kwiksort 5x approximation on uniform profiles"};
  Rng rng(20260303);
  double total_cost = 0.0, total_opt = 0.0;
  int within_individual_bound = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const RankingProfile profile = uniform_profile(6, 15, rng);
    const PairwiseWeights w = build_weights(profile);
    ExactOracle oracle(w);
    Rng run_rng(rng.next_u64());
    const Ranking out = *kwiksort(oracle, 6, run_rng);
    const double cost = kemeny_cost(out, w);
    const double opt = opt_bruteforce(w).cost;
    total_cost += cost;
    total_opt += opt;
    if (cost <= 5.0 * opt + 1.0) ++within_individual_bound;
  }
  EXPECT_LE(total_cost, 5.0 * total_opt);
  EXPECT_GE(within_individual_bound, 990);
}

TEST(Acceptance, Criterion04_CentralErrorScaling) {
  CriterionReporter report{4, "central additive error scales like 1/n"};
  const auto started = std::chrono::steady_clock::now();
  const std::vector<int> n_grid{200, 800, 3200, 12800, 51200};
  const int trials = 200;
  std::vector<double> log_n, log_err;
  Rng seeds(20260404);
  for (const int n : n_grid) {
    double total_err = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      Rng rng(seeds.next_u64());
      Rng profile_rng(rng.next_u64());
      const RankingProfile profile = near_tied_profile(8, n, 8, profile_rng);
      const PairwiseWeights w = build_weights(profile);
      const AggregationResult result =
          dp_kwiksort(w, PrivacyBudget(1.0), n, kDefaultBudgetConstant, rng);
      total_err += result.cost - opt_bruteforce(w).cost;
    }
    const double mean_err = total_err / trials;
    ASSERT_GT(mean_err, 0.0);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_err.push_back(std::log(mean_err));
  }
  const double slope = ols_slope(log_n, log_err);
  EXPECT_GE(slope, -1.25);
  EXPECT_LE(slope, -0.75);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  EXPECT_LE(elapsed, 180.0);
  std::printf("  central slope %.4f (%.1fs)\n", slope, elapsed);
}

TEST(Acceptance, Criterion05_GaussianBeatsLaplace) {
  CriterionReporter report{5, "gaussian mechanism error <= laplace error"};
  Rng profile_rng(20260505);
  const RankingProfile profile =
      mallows_sample(Ranking::identity(10), 0.66, 2000, profile_rng);
  const PairwiseWeights w = build_weights(profile);
  const double opt = opt_bruteforce(w).cost;
  const int trials = 500;
  double sum_lap = 0.0, sum_sq_lap = 0.0, sum_gauss = 0.0, sum_sq_gauss = 0.0;
  Rng seeds(20260506);
  for (int trial = 0; trial < trials; ++trial) {
    Rng lap_rng(seeds.next_u64());
    const double err_lap =
        dp_kwiksort(w, PrivacyBudget(1.0), 2000, 8.0, lap_rng).cost - opt;
    sum_lap += err_lap;
    sum_sq_lap += err_lap * err_lap;
    Rng gauss_rng(seeds.next_u64());
    const double err_gauss =
        dp_kwiksort(w, PrivacyBudget(1.0, 1e-6), 2000, 8.0, gauss_rng).cost - opt;
    sum_gauss += err_gauss;
    sum_sq_gauss += err_gauss * err_gauss;
  }
  const double mean_lap = sum_lap / trials;
  const double mean_gauss = sum_gauss / trials;
  const double var_lap = sum_sq_lap / trials - mean_lap * mean_lap;
  const double var_gauss = sum_sq_gauss / trials - mean_gauss * mean_gauss;
  const double pooled_se = std::sqrt(var_lap / trials + var_gauss / trials);
  EXPECT_LE(mean_gauss, mean_lap + pooled_se);
  std::printf("  gaussian %.4f vs laplace %.4f (pooled se %.4f)\n", mean_gauss,
              mean_lap, pooled_se);
}

TEST(Acceptance, Criterion06_LocalErrorScaling) {
  CriterionReporter report{6, "local additive error scales like 1/sqrt(n)"};
  const std::vector<int> n_grid{1000, 4000, 16000, 64000};
  const int trials = 200;
  for (const bool adaptive : {false, true}) {
    std::vector<double> log_n, log_err;
    Rng seeds(adaptive ? 20260606 : 20260607);
    for (const int n : n_grid) {
      double total_err = 0.0;
      for (int trial = 0; trial < trials; ++trial) {
        Rng rng(seeds.next_u64());
        Rng profile_rng(rng.next_u64());
        const RankingProfile profile = uniform_profile(6, n, profile_rng);
        const PairwiseWeights w = build_weights(profile);
        const AggregationResult result =
            adaptive ? ldp_kwiksort(profile, 2.0, kDefaultBudgetConstant, rng)
                     : reduce_local_noise_all(profile, 2.0, BaseRanker::kExact, rng);
        total_err += result.cost - opt_bruteforce(w).cost;
      }
      const double mean_err = total_err / trials;
      ASSERT_GT(mean_err, 0.0);
      log_n.push_back(std::log(static_cast<double>(n)));
      log_err.push_back(std::log(mean_err));
    }
    const double slope = ols_slope(log_n, log_err);
    EXPECT_GE(slope, -0.7) << (adaptive ? "ldpkwiksort" : "localnoiseall");
    EXPECT_LE(slope, -0.3) << (adaptive ? "ldpkwiksort" : "localnoiseall");
    std::printf("  %s slope %.4f\n", adaptive ? "ldpkwiksort" : "localnoiseall", slope);
  }
}

TEST(Acceptance, Criterion07_AdaptiveAnswererContract) {
  CriterionReporter report{7, "adaptive answerer: unbiased, variance rate, refusal rate"};
  // (a) Unbiasedness: fraction 0.6 prefers item 1 over item 0.
  {
    std::vector<Ranking> rankings;
    for (int rep = 0; rep < 10000; ++rep) {
      rankings.push_back(rep % 10 < 6 ? Ranking::from_order({1, 0, 2, 3, 4})
                                      : Ranking::from_order({0, 2, 3, 4, 1}));
    }
    const RankingProfile profile(std::move(rankings));
    std::vector<LocalUser> users = make_users(profile);
    const long long q = static_cast<long long>(std::ceil(10.0 * 5.0 * std::log(5.0)));
    const int runs = 500;
    double sum = 0.0, sum_sq = 0.0;
    Rng seeds(20260707);
    for (int run = 0; run < runs; ++run) {
      AdaptiveLocalAnswerer answerer(users, 5, 1.0, q, Rng(seeds.next_u64()));
      const double est = *answerer.query(1, 0);
      sum += est;
      sum_sq += est * est;
    }
    const double mean = sum / runs;
    const double var = sum_sq / runs - mean * mean;
    EXPECT_NEAR(mean, 0.6, 3.0 * std::sqrt(var / runs));
  }
  // (b) Per-query variance <= 50 q^2 / (n m eps^2) across the grid.
  {
    Rng grid_seeds(20260708);
    for (const int m : {5, 8})
      for (const int n : {10000, 100000})
        for (const double epsilon : {1.0, 2.0}) {
          Rng profile_rng(grid_seeds.next_u64());
          const RankingProfile profile = uniform_profile(m, n, profile_rng);
          std::vector<LocalUser> users = make_users(profile);
          const long long q = static_cast<long long>(
              std::ceil(10.0 * m * std::log(static_cast<double>(m))));
          const int runs = 200;
          double sum = 0.0, sum_sq = 0.0;
          for (int run = 0; run < runs; ++run) {
            AdaptiveLocalAnswerer answerer(users, m, epsilon, q,
                                           Rng(grid_seeds.next_u64()));
            const double est = *answerer.query(0, 1);
            sum += est;
            sum_sq += est * est;
          }
          const double mean = sum / runs;
          const double var = sum_sq / runs - mean * mean;
          const double bound = 50.0 * static_cast<double>(q) * static_cast<double>(q) /
                               (static_cast<double>(n) * m * epsilon * epsilon);
          ASSERT_LE(var, bound) << "m=" << m << " n=" << n << " eps=" << epsilon;
        }
  }
  // (c) Refusal rate under q round-robin queries stays below the bound.
  {
    const int m = 8;
    const long long q =
        static_cast<long long>(std::ceil(10.0 * m * std::log(static_cast<double>(m))));
    Rng profile_rng(20260709);
    const RankingProfile profile = uniform_profile(m, 800, profile_rng);
    std::vector<LocalUser> users = make_users(profile);
    const int runs = 1000;
    int refused_runs = 0;
    Rng seeds(20260710);
    for (int run = 0; run < runs; ++run) {
      AdaptiveLocalAnswerer answerer(users, m, 1.0, q, Rng(seeds.next_u64()));
      long long issued = 0;
      bool refused = false;
      for (int sweep = 0; issued < q && !refused; ++sweep) {
        for (int j = 0; j < m && issued < q; ++j)
          for (int i = 0; i < m && issued < q; ++i) {
            if (i == j) continue;
            ++issued;
            if (!answerer.query(j, i)) {
              refused = true;
              break;
            }
          }
      }
      if (refused) ++refused_runs;
    }
    const double bound = std::exp(-0.1 * static_cast<double>(q) / m);
    const double three_sigma = 3.0 * std::sqrt(bound * (1.0 - bound) / runs);
    EXPECT_LE(static_cast<double>(refused_runs) / runs, bound + three_sigma);
    std::printf("  refusal rate %.4f (bound %.4f)\n",
                static_cast<double>(refused_runs) / runs, bound + three_sigma);
  }
}

TEST(Acceptance, Criterion08_PrivacyLedgerAudit) {
  CriterionReporter report{8, "privacy ledgers: caps, budget splits, no raw reads"};
  // Local runs, including exhausted-budget ones (constant 1 at m=6).
  Rng rng(20260808);
  const RankingProfile profile = uniform_profile(6, 200, rng);
  Rng seeds(20260809);
  bool saw_fallback = false;
  for (int trial = 0; trial < 40; ++trial) {
    for (const double constant : {1.0, 8.0}) {
      LocalRunAudit audit;
      Rng run_rng(seeds.next_u64());
      const AggregationResult result =
          ldp_kwiksort(profile, 2.0, constant, run_rng, {}, &audit);
      saw_fallback = saw_fallback || result.fallback_used;
      ASSERT_DOUBLE_EQ(audit.adaptive_epsilon, 1.0);  // epsilon/2
      ASSERT_DOUBLE_EQ(audit.fallback_epsilon, 1.0);  // epsilon/2
      const double eps0 =
          0.5 * audit.adaptive_epsilon * 6.0 / static_cast<double>(audit.q);
      for (std::size_t k = 0; k < audit.after_run.size(); ++k) {
        const UserLedgerEntry& adaptive = audit.after_adaptive[k];
        const UserLedgerEntry& total = audit.after_run[k];
        ASSERT_LE(adaptive.rr_applications, audit.cap);
        ASSERT_LE(adaptive.budget_spent,
                  static_cast<double>(audit.cap) * eps0 + 1e-12);
        ASSERT_LE(adaptive.budget_spent, audit.adaptive_epsilon + 1e-12);
        ASSERT_LE(total.budget_spent, 2.0 + 1e-12);  // full epsilon
        if (total.dummy) {
          ASSERT_EQ(total.bit_reads, 0);  // dummies never touch a ranking
        } else {
          // every raw-bit read is mediated by a randomized-response report
          ASSERT_EQ(total.bit_reads, total.rr_applications);
        }
      }
    }
  }
  EXPECT_TRUE(saw_fallback);

  // Central runs: reveal counts within the limit and the epsilon/2 split,
  // on both the normal and the exhausted-budget path.
  Rng central_rng(20260810);
  const RankingProfile central_profile = uniform_profile(8, 100, central_rng);
  const PairwiseWeights w = build_weights(central_profile);
  Rng central_seeds(20260811);
  for (int trial = 0; trial < 40; ++trial) {
    for (const double constant : {0.2, 8.0}) {
      CentralRunAudit audit;
      Rng run_rng(central_seeds.next_u64());
      const AggregationResult result =
          dp_kwiksort(w, PrivacyBudget(1.0), 100, constant, run_rng, {}, &audit);
      ASSERT_LE(audit.pairs_noised_primary, audit.query_limit);
      ASSERT_DOUBLE_EQ(audit.primary_epsilon, 0.5);
      ASSERT_DOUBLE_EQ(audit.fallback_epsilon, 0.5);
      if (result.fallback_used) {
        ASSERT_EQ(audit.pairs_noised_primary, audit.query_limit);
        ASSERT_EQ(audit.fallback_pairs_noised, 28);
      }
    }
  }
}

TEST(Acceptance, Criterion09_LowerBoundLab) {
  CriterionReporter report{9, "embedding round trip + marginal bounds, exact"};
  // Exhaustive truth table: the embedding fixes the middle block, swaps
  // exactly the -1 pairs, and the recovered vector is the negation.
  for (int d = 1; d <= 3; ++d)
    for (int t = 1; t <= 2; ++t)
      for (int mask = 0; mask < (1 << d); ++mask) {
        std::vector<int> x(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
          x[static_cast<std::size_t>(j)] = (mask >> j) & 1 ? 1 : -1;
        const Ranking embedded = embed_pi(x, d, t);
        for (int mid = d; mid < d + t; ++mid)
          ASSERT_EQ(embedded.position_of(mid), mid);
        for (int j = 0; j < d; ++j) {
          const int partner = j + d + t;
          if (x[static_cast<std::size_t>(j)] == 1) {
            ASSERT_EQ(embedded.position_of(j), j);
            ASSERT_EQ(embedded.position_of(partner), partner);
          } else {
            ASSERT_EQ(embedded.position_of(j), partner);
            ASSERT_EQ(embedded.position_of(partner), j);
          }
        }
        const std::vector<int> rho = recover_rho(embedded, d, t);
        for (int j = 0; j < d; ++j)
          ASSERT_EQ(rho[static_cast<std::size_t>(j)], -x[static_cast<std::size_t>(j)]);
      }

  // Randomized inequality checks in exact integer arithmetic.
  Rng rng(20260909);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<std::vector<int>> xs;
    for (int k = 0; k < 5; ++k) xs.push_back(random_signs(3, rng));
    const MarginalInstance instance(3, 2, xs);
    const ObservationReport lower =
        check_observations(instance, random_ranking(8, rng));
    ASSERT_TRUE(lower.lower_holds);
  }
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<std::vector<int>> xs;
    for (int k = 0; k < 5; ++k) xs.push_back(random_signs(3, rng));
    const MarginalInstance instance(3, 2, xs);
    const std::vector<int> y = random_signs(3, rng);
    const ObservationReport both =
        check_observations(instance, embed_pi(y, 3, 2), y);
    ASSERT_TRUE(both.lower_holds);
    ASSERT_TRUE(both.upper_holds);
  }
}

TEST(Acceptance, Criterion10_EndToEndWorkedExample) {
  CriterionReporter report{10, "worked five-item example through the oracle CLI"};
  const fs::path input = scratch_dir() / "office.csv";
  {
    std::ofstream out(input);
    out << "# m=5\n0,1,2,3,4\n4,0,2,3,1\n2,3,1,0,4\n0,1,3,2,4\n";
  }
  const CliResult result = run_cli("oracle --input " + input.string());
  EXPECT_EQ(result.exit_code, 0);
  // Frozen at first computation: minimum over all 120 orderings is 3, and
  // the lexicographically smallest minimizer is the identity.
  EXPECT_EQ(result.out, "ranking: 0,1,2,3,4\nopt: 3\n");

  // The library agrees with the CLI.
  const AggregationResult direct = opt_bruteforce(build_weights(example_office_profile()));
  EXPECT_DOUBLE_EQ(direct.cost, 3.0);
  EXPECT_EQ(direct.ranking, Ranking::identity(5));
}

TEST(Acceptance, Criterion11_CliDeterminism) {
  CriterionReporter report{11, "every CLI command is byte-identical on re-run"};
  const fs::path dir = scratch_dir();
  const fs::path mallows_a = dir / "mallows_a.csv";
  const fs::path mallows_b = dir / "mallows_b.csv";
  const fs::path uniform_a = dir / "uniform_a.csv";
  const fs::path uniform_b = dir / "uniform_b.csv";

  // gen: identical files from identical seeds.
  for (const auto& [path_a, path_b, model] :
       {std::tuple{mallows_a, mallows_b, std::string("mallows --phi 0.7")},
        std::tuple{uniform_a, uniform_b, std::string("uniform")}}) {
    const std::string base = "gen --model " + model + " --m 6 --n 40 --seed 11";
    EXPECT_EQ(run_cli(base + " --output " + path_a.string()).exit_code, 0);
    EXPECT_EQ(run_cli(base + " --output " + path_b.string()).exit_code, 0);
    const std::string bytes = slurp(path_a);
    EXPECT_FALSE(bytes.empty());
    EXPECT_EQ(bytes, slurp(path_b));
  }

  // aggregate: identical stdout for every algorithm.
  const std::string input = " --input " + mallows_a.string();
  const std::vector<std::string> invocations = {
      "aggregate" + input + " --model none --algorithm exact",
      "aggregate" + input + " --model none --algorithm borda",
      "aggregate" + input + " --model none --algorithm kwiksort --seed 5",
      "aggregate" + input + " --model central --algorithm noiseall --epsilon 1 --seed 5",
      "aggregate" + input +
          " --model central --algorithm dpkwiksort --epsilon 1 --delta 1e-6"
          " --mechanism gaussian --seed 5",
      "aggregate" + input + " --model local --algorithm localnoiseall --epsilon 2 --seed 5",
      "aggregate" + input + " --model local --algorithm ldpkwiksort --epsilon 2 --seed 5",
      "oracle" + input,
      "lowerbound-check --d 3 --t 2 --trials 200 --seed 3",
  };
  for (const std::string& invocation : invocations) {
    const CliResult first = run_cli(invocation);
    const CliResult second = run_cli(invocation);
    EXPECT_EQ(first.exit_code, 0) << invocation;
    EXPECT_FALSE(first.out.empty()) << invocation;
    EXPECT_EQ(first.out, second.out) << invocation;
  }

  // aggregate with a transcript: both stdout and the transcript file agree.
  {
    const fs::path transcript_a = dir / "transcript_a.jsonl";
    const fs::path transcript_b = dir / "transcript_b.jsonl";
    const std::string base = "aggregate" + input +
                             " --model local --algorithm ldpkwiksort --epsilon 2"
                             " --seed 9 --transcript ";
    const CliResult first = run_cli(base + transcript_a.string());
    const CliResult second = run_cli(base + transcript_b.string());
    EXPECT_EQ(first.exit_code, 0);
    EXPECT_EQ(first.out, second.out);
    const std::string bytes = slurp(transcript_a);
    EXPECT_FALSE(bytes.empty());
    EXPECT_EQ(bytes, slurp(transcript_b));
  }

  // experiment: identical result CSVs.
  {
    const fs::path config = dir / "experiment.json";
    const fs::path out_a = dir / "rows_a.csv";
    const fs::path out_b = dir / "rows_b.csv";
    for (const auto& [cfg_out, label] :
         {std::pair{out_a, 'a'}, std::pair{out_b, 'b'}}) {
      std::ofstream cfg(config);
      cfg << "{\n"
          << "  \"m\": 5, \"n_grid\": [20, 40], \"epsilon_grid\": [1.0],\n"
          << "  \"model\": \"central\", \"algorithm\": \"dpkwiksort\",\n"
          << "  \"trials\": 3, \"master_seed\": 17,\n"
          << "  \"profile\": {\"model\": \"uniform\"},\n"
          << "  \"output\": \"" << cfg_out.string() << "\"\n"
          << "}\n";
      cfg.close();
      EXPECT_EQ(run_cli("experiment --config " + config.string()).exit_code, 0)
          << label;
    }
    const std::string bytes = slurp(out_a);
    EXPECT_FALSE(bytes.empty());
    EXPECT_EQ(bytes, slurp(out_b));
    EXPECT_EQ(bytes.find(kResultCsvHeader), 0u);
  }

  // Exit codes: validation failures -> 2, guard violations -> 3.
  {
    const CliResult bad_algorithm =
        run_cli("aggregate" + input + " --model central --algorithm exact --epsilon 1");
    EXPECT_EQ(bad_algorithm.exit_code, 2);
    const fs::path big = dir / "big.csv";
    EXPECT_EQ(run_cli("gen --model uniform --m 11 --n 3 --seed 1 --output " +
                      big.string())
                  .exit_code,
              0);
    EXPECT_EQ(run_cli("oracle --input " + big.string()).exit_code, 3);
  }
}

}  // namespace
}  // namespace dpkemeny
