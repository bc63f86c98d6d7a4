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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "dpkemeny/base_rankers.hpp"
#include "dpkemeny/errors.hpp"
#include "dpkemeny/oracle.hpp"
#include "dpkemeny/ranking.hpp"
#include "dpkemeny/rng.hpp"

namespace dpkemeny {

// Two-outcome randomized response configuration for a per-application budget
// epsilon0. d_eps = (e^eps0 + 1) / (e^eps0 - 1) = coth(eps0 / 2) > 1.
struct RRConfig {
  double epsilon0;
  double d_eps;

  explicit RRConfig(double eps0) : epsilon0(eps0) {
    if (!(eps0 > 0.0)) throw InputError("randomized response budget must be positive");
    d_eps = 1.0 / std::tanh(eps0 / 2.0);
  }
};

// Releases +d_eps with probability (1 + input/d_eps)/2, else -d_eps.
// Requires |input| <= 1; unbiased: E[output] = input.
inline double randomized_response(double input, const RRConfig& rr, Rng& rng) {
  if (!(std::abs(input) <= 1.0))
    throw InputError("randomized response input must lie in [-1, 1]");
  const double p_plus = 0.5 * (1.0 + input / rr.d_eps);
  return rng.bernoulli(p_plus) ? rr.d_eps : -rr.d_eps;
}

// A simulated user. The private ranking has no public accessor; the only way
// it influences anything is through randomized-response reports, and every
// raw-bit read is logged so tests can audit that reads happen exactly once
// per report. Dummy users pad partition sizes and report the recentred
// midpoint 0 (a fair coin).
class LocalUser {
 public:
  explicit LocalUser(Ranking ranking) : ranking_(std::move(ranking)) {}

  static LocalUser dummy() { return LocalUser(); }

  bool is_dummy() const { return !ranking_.has_value(); }

  // Report on the {0,1} indicator of "ranks j before i".
  double respond_pair(int j, int i, const RRConfig& rr, Rng& rng) {
    const double input = is_dummy() ? 0.0 : (pair_bit(j, i) ? 1.0 : 0.0);
    note_application(rr);
    return randomized_response(input, rr, rng);
  }

  // Report on the +-1 recentred indicator (vector-mean mechanism).
  double respond_signed(int j, int i, const RRConfig& rr, Rng& rng) {
    const double input = is_dummy() ? 0.0 : (pair_bit(j, i) ? 1.0 : -1.0);
    note_application(rr);
    return randomized_response(input, rr, rng);
  }

  // Test hook: the raw +-1 coordinate with no randomization. Not an RR
  // application; audit tests must not be run with this enabled.
  double noise_free_coordinate(int j, int i) {
    return is_dummy() ? 0.0 : (pair_bit(j, i) ? 1.0 : -1.0);
  }

  long long rr_applications() const { return rr_applications_; }
  double budget_spent() const { return budget_spent_; }
  long long bit_reads() const { return bit_reads_; }

 private:
  LocalUser() = default;

  bool pair_bit(int j, int i) {
    ++bit_reads_;
    return ranking_->prefers(j, i);
  }

  void note_application(const RRConfig& rr) {
    ++rr_applications_;
    budget_spent_ += rr.epsilon0;
  }

  std::optional<Ranking> ranking_;
  long long rr_applications_ = 0;
  double budget_spent_ = 0.0;
  long long bit_reads_ = 0;
};

inline std::vector<LocalUser> make_users(const RankingProfile& profile) {
  std::vector<LocalUser> users;
  users.reserve(static_cast<std::size_t>(profile.n()));
  for (const Ranking& r : profile.rankings()) users.emplace_back(r);
  return users;
}

// A uniformly random balanced split of `total` users into m blocks of equal
// size. total must be a multiple of m.
struct UserPartition {
  std::vector<int> assignment;            // user index -> partition index
  std::vector<std::vector<int>> members;  // partition index -> user indices

  static UserPartition random_balanced(int total, int m, Rng& rng) {
    if (m < 1) throw InputError("partition needs at least one block");
    if (total < m || total % m != 0)
      throw InputError("partition requires a positive multiple of m users");
    std::vector<int> shuffled(static_cast<std::size_t>(total));
    std::iota(shuffled.begin(), shuffled.end(), 0);
    for (int k = total - 1; k > 0; --k) {
      const int r = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k) + 1));
      std::swap(shuffled[static_cast<std::size_t>(k)], shuffled[static_cast<std::size_t>(r)]);
    }
    UserPartition p;
    p.assignment.resize(static_cast<std::size_t>(total));
    p.members.resize(static_cast<std::size_t>(m));
    const int per = total / m;
    for (int block = 0; block < m; ++block)
      for (int k = 0; k < per; ++k) {
        const int user = shuffled[static_cast<std::size_t>(block * per + k)];
        p.assignment[static_cast<std::size_t>(user)] = block;
        p.members[static_cast<std::size_t>(block)].push_back(user);
      }
    return p;
  }
};

// Fixed map from each ordered pair (j, i) to the partition answering it,
// drawn i.i.d. uniform at construction so answers cannot depend on query
// order.
struct PairAssignment {
  int m = 0;
  std::vector<int> ell;  // row-major (j * m + i)

  static PairAssignment random(int m, Rng& rng) {
    PairAssignment pa;
    pa.m = m;
    pa.ell.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        if (i != j)
          pa.ell[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) +
                 static_cast<std::size_t>(i)] =
              static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(m)));
    return pa;
  }

  int at(int j, int i) const {
    return ell[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) +
               static_cast<std::size_t>(i)];
  }
};

// One line of the optional query transcript.
struct QueryRecord {
  int j = 0;
  int i = 0;
  int partition = 0;
  long long counter_value = 0;
  std::optional<double> estimate;  // nullopt on budget-exhaustion
};

using TranscriptSink = std::function<void(const QueryRecord&)>;

// Interactive local answerer: each query (j, i) is answered by one fixed
// random partition of users, every member replying once through randomized
// response at eps0 = 0.5 * epsilon * m / q. A partition answers at most
// floor(2q/m) queries; past that the query returns nothing (and consumes no
// reports). Each ordered pair has its own derived randomness stream, so the
// answer to a pair does not depend on when it is asked.
class AdaptiveLocalAnswerer : public WeightOracle {
 public:
  AdaptiveLocalAnswerer(std::vector<LocalUser>& users, int m, double epsilon,
                        long long q, Rng rng, TranscriptSink transcript = nullptr)
      : users_(users),
        m_(m),
        q_(q),
        rr_(compute_eps0(epsilon, m, q)),
        transcript_(std::move(transcript)) {
    if (m < 2) throw InputError("need at least two items");
    if (users.empty()) throw InputError("need at least one user");
    if (cap() < 1) throw InputError("query budget too small: partition cap is zero");
    const int n = static_cast<int>(users.size());
    const int pad = (m - n % m) % m;
    for (int k = 0; k < pad; ++k) dummies_.push_back(LocalUser::dummy());
    Rng setup(rng.next_u64());
    partition_ = UserPartition::random_balanced(n + pad, m, setup);
    pairs_ = PairAssignment::random(m, setup);
    pair_stream_base_ = rng.next_u64();
    counters_.assign(static_cast<std::size_t>(m), 0);
  }

  std::optional<double> query(int j, int i) override {
    if (j == i || j < 0 || i < 0 || j >= m_ || i >= m_)
      throw InputError("invalid pair query");
    const int p = pairs_.at(j, i);
    long long& c = counters_[static_cast<std::size_t>(p)];
    ++c;
    if (c > cap()) {
      if (transcript_) transcript_(QueryRecord{j, i, p, c, std::nullopt});
      return std::nullopt;
    }
    Rng pair_rng(derive_seed(pair_stream_base_,
                             {static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(m_) +
                              static_cast<std::uint64_t>(i)}));
    const int n_real = static_cast<int>(users_.size());
    double sum = 0.0;
    for (const int user_idx : partition_.members[static_cast<std::size_t>(p)]) {
      LocalUser& user = user_idx < n_real
                            ? users_[static_cast<std::size_t>(user_idx)]
                            : dummies_[static_cast<std::size_t>(user_idx - n_real)];
      sum += user.respond_pair(j, i, rr_, pair_rng);
    }
    // Dummy reports have mean zero, so the average is taken over real users.
    const double estimate = static_cast<double>(m_) / static_cast<double>(n_real) * sum;
    ++queries_answered_;
    if (transcript_) transcript_(QueryRecord{j, i, p, c, estimate});
    return estimate;
  }

  long long cap() const { return 2 * q_ / static_cast<long long>(m_); }
  long long queries_answered() const { return queries_answered_; }
  const RRConfig& rr() const { return rr_; }
  const UserPartition& partition() const { return partition_; }
  const PairAssignment& pair_assignment() const { return pairs_; }
  const std::vector<LocalUser>& dummies() const { return dummies_; }
  int dummy_count() const { return static_cast<int>(dummies_.size()); }

 private:
  static double compute_eps0(double epsilon, int m, long long q) {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    if (q < 1) throw InputError("query budget must be at least 1");
    return 0.5 * epsilon * static_cast<double>(m) / static_cast<double>(q);
  }

  std::vector<LocalUser>& users_;
  int m_;
  long long q_;
  RRConfig rr_;
  TranscriptSink transcript_;
  std::vector<LocalUser> dummies_;
  UserPartition partition_;
  PairAssignment pairs_;
  std::uint64_t pair_stream_base_ = 0;
  std::vector<long long> counters_;
  long long queries_answered_ = 0;
};

// Test seams for the vector-mean mechanism.
struct LocalFullMatrixOptions {
  bool sample_all_coordinates = false;  // every coordinate instead of one
  bool deterministic_response = false;  // raw coordinates instead of RR
};

// One-shot local estimate of the full weight matrix. Each user views their
// ranking as the m(m-1)-dimensional vector of +-1 pairwise indicators,
// reports one uniformly sampled coordinate through epsilon-randomized
// response, and the aggregator inverse-probability-scales, averages, and maps
// back to [0,1]. The i<j estimate defines each unordered pair (clipped), so
// the output satisfies the probability constraint.
inline PairwiseWeights local_full_matrix_users(std::vector<LocalUser>& users, int m,
                                               double epsilon, Rng& rng,
                                               const LocalFullMatrixOptions& opt = {}) {
  if (m < 2) throw InputError("need at least two items");
  if (users.empty()) throw InputError("need at least one user");
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  const long long d = static_cast<long long>(m) * (m - 1);
  const RRConfig rr(epsilon);
  std::vector<double> acc(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
  const auto slot = [m](int j, int i) {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(m) +
           static_cast<std::size_t>(i);
  };
  for (LocalUser& user : users) {
    if (opt.sample_all_coordinates) {
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
          if (i == j) continue;
          acc[slot(j, i)] += opt.deterministic_response
                                 ? user.noise_free_coordinate(j, i)
                                 : user.respond_signed(j, i, rr, rng);
        }
    } else {
      // Map a uniform draw over d ordered pairs to (j, i).
      const long long pick = static_cast<long long>(rng.uniform_index(static_cast<std::uint64_t>(d)));
      const int j = static_cast<int>(pick / (m - 1));
      int i = static_cast<int>(pick % (m - 1));
      if (i >= j) ++i;
      const double response = opt.deterministic_response
                                  ? user.noise_free_coordinate(j, i)
                                  : user.respond_signed(j, i, rr, rng);
      acc[slot(j, i)] += static_cast<double>(d) * response;
    }
  }
  const double n = static_cast<double>(users.size());
  PairwiseWeights out(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double signed_mean = acc[slot(i, j)] / n;
      const double raw = 0.5 * (1.0 + signed_mean);
      out.set_pair(i, j, std::clamp(raw, 0.0, 1.0));
    }
  return out;
}

inline PairwiseWeights local_full_matrix(const RankingProfile& profile, double epsilon,
                                         Rng& rng, const LocalFullMatrixOptions& opt = {}) {
  std::vector<LocalUser> users = make_users(profile);
  return local_full_matrix_users(users, profile.m(), epsilon, rng, opt);
}

// Test seams for the local reductions. noise_free routes comparisons to the
// true weights (no reports are sent at all).
struct LocalHooks {
  bool noise_free = false;
};

// Per-user ledger snapshot for privacy audits.
struct UserLedgerEntry {
  long long rr_applications = 0;
  double budget_spent = 0.0;
  long long bit_reads = 0;
  bool dummy = false;
};

struct LocalRunAudit {
  long long q = 0;
  long long cap = 0;
  int real_users = 0;
  int dummy_users = 0;
  double adaptive_epsilon = 0.0;
  double fallback_epsilon = 0.0;
  bool fallback_used = false;
  long long queries_answered = 0;
  std::vector<UserLedgerEntry> after_adaptive;  // real users, then dummies
  std::vector<UserLedgerEntry> after_run;
};

namespace detail {

inline std::vector<UserLedgerEntry> snapshot_ledgers(const std::vector<LocalUser>& users,
                                                     const std::vector<LocalUser>& dummies) {
  std::vector<UserLedgerEntry> out;
  out.reserve(users.size() + dummies.size());
  for (const LocalUser& u : users)
    out.push_back({u.rr_applications(), u.budget_spent(), u.bit_reads(), false});
  for (const LocalUser& u : dummies)
    out.push_back({u.rr_applications(), u.budget_spent(), u.bit_reads(), true});
  return out;
}

}  // namespace detail

// Local analogue of the noise-everything reduction: estimate the full matrix
// with one epsilon-DP report per user, then run the base algorithm on it.
// Cost is measured against the true weights.
inline AggregationResult reduce_local_noise_all(const RankingProfile& profile,
                                                double epsilon, BaseRanker base,
                                                Rng& rng, const LocalHooks& hooks = {}) {
  const PairwiseWeights truth = build_weights(profile);
  Rng report_rng(rng.next_u64());
  Rng base_rng(rng.next_u64());
  const PairwiseWeights estimate =
      hooks.noise_free ? truth : local_full_matrix(profile, epsilon, report_rng);
  const Ranking ranking = run_base(estimate, base, base_rng);
  const int m = profile.m();
  return AggregationResult{ranking, kemeny_cost(ranking, truth),
                           static_cast<long long>(m) * (m - 1) / 2,
                           /*fallback_used=*/false, rng.seed()};
}

// Interactive local aggregation: KwikSort against an adaptive answerer
// holding half the budget and q = query_budget(m, constant) queries. If any
// query comes back empty, the other half of the budget pays for a full local
// matrix estimate (exact search when m <= 10, else KwikSort on it).
inline AggregationResult ldp_kwiksort(const RankingProfile& profile, double epsilon,
                                      double constant, Rng& rng,
                                      const LocalHooks& hooks = {},
                                      LocalRunAudit* audit = nullptr,
                                      TranscriptSink transcript = nullptr) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  const int m = profile.m();
  const long long q = query_budget(m, constant);
  const PairwiseWeights truth = build_weights(profile);

  if (hooks.noise_free) {
    ExactOracle oracle(truth);
    Rng pivot_rng(rng.next_u64());
    const Ranking ranking = *kwiksort(oracle, m, pivot_rng);
    return AggregationResult{ranking, kemeny_cost(ranking, truth),
                             oracle.queries_used(), /*fallback_used=*/false,
                             rng.seed()};
  }

  std::vector<LocalUser> users = make_users(profile);
  AdaptiveLocalAnswerer answerer(users, m, epsilon / 2.0, q, Rng(rng.next_u64()),
                                 std::move(transcript));
  Rng pivot_rng(rng.next_u64());
  Rng fallback_rng(rng.next_u64());
  Rng base_rng(rng.next_u64());

  if (audit) {
    audit->q = q;
    audit->cap = answerer.cap();
    audit->real_users = profile.n();
    audit->dummy_users = answerer.dummy_count();
    audit->adaptive_epsilon = epsilon / 2.0;
    audit->fallback_epsilon = epsilon / 2.0;
  }

  const std::optional<Ranking> sorted = kwiksort(answerer, m, pivot_rng);
  if (audit) {
    audit->queries_answered = answerer.queries_answered();
    audit->after_adaptive = detail::snapshot_ledgers(users, answerer.dummies());
  }

  AggregationResult result{Ranking::identity(m), 0.0, answerer.queries_answered(),
                           false, rng.seed()};
  if (sorted) {
    result.ranking = *sorted;
  } else {
    const PairwiseWeights estimate =
        local_full_matrix_users(users, m, epsilon / 2.0, fallback_rng);
    const BaseRanker base = m <= 10 ? BaseRanker::kExact : BaseRanker::kKwikSort;
    result.ranking = run_base(estimate, base, base_rng);
    result.fallback_used = true;
  }
  result.cost = kemeny_cost(result.ranking, truth);
  if (audit) {
    audit->fallback_used = result.fallback_used;
    audit->after_run = detail::snapshot_ledgers(users, answerer.dummies());
  }
  return result;
}

}  // namespace dpkemeny
