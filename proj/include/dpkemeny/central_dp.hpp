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
#include <optional>
#include <vector>

#include "dpkemeny/base_rankers.hpp"
#include "dpkemeny/errors.hpp"
#include "dpkemeny/oracle.hpp"
#include "dpkemeny/ranking.hpp"
#include "dpkemeny/rng.hpp"

namespace dpkemeny {

struct PrivacyBudget {
  double epsilon;
  double delta;

  explicit PrivacyBudget(double eps, double del = 0.0) : epsilon(eps), delta(del) {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    if (delta < 0.0 || delta >= 1.0) throw InputError("delta must lie in [0, 1)");
  }

  bool pure() const { return delta == 0.0; }
  PrivacyBudget halved() const { return PrivacyBudget(epsilon / 2.0, delta); }
};

enum class NoiseKind { kLaplace, kGaussian };

// Test seams. forced_scale overrides the per-query noise scale (0 gives the
// noise-free limit); it leaves privacy accounting untouched and exists only
// for tests.
struct CentralHooks {
  std::optional<double> forced_scale;
};

// Trusted-curator query answerer. Each unordered pair is noised at most once
// per run (lazily, on first reveal): noise is added to the i<j orientation,
// the sum is clipped to [0, 1], and the j>i orientation is served as the
// complement, so revealed entries always satisfy the probability constraint.
// At most `query_limit` pairs are revealed; further fresh pairs fail.
class CentralAnswerer : public WeightOracle {
 public:
  CentralAnswerer(const PairwiseWeights& w, NoiseKind kind, double scale,
                  long long query_limit, Rng rng)
      : w_(w),
        kind_(kind),
        scale_(scale),
        rng_(rng),
        cache_(static_cast<std::size_t>(w.m()) * static_cast<std::size_t>(w.m())) {
    if (query_limit < 1) throw InputError("query limit must be at least 1");
    if (scale < 0.0) throw InputError("noise scale must be nonnegative");
    counter_.limit = query_limit;
  }

  std::optional<double> query(int j, int i) override {
    if (j == i) throw InputError("cannot query a diagonal entry");
    const int a = std::min(j, i);
    const int b = std::max(j, i);
    std::optional<double>& slot =
        cache_[static_cast<std::size_t>(a) * static_cast<std::size_t>(w_.m()) +
               static_cast<std::size_t>(b)];
    if (!slot) {
      if (!counter_.try_consume()) return std::nullopt;
      const double raw = w_.at(a, b) + draw_noise();
      const double clipped = std::clamp(raw, 0.0, 1.0);
      if (clipped != raw) ++clip_count_;
      slot = clipped;
    }
    return j == a ? *slot : 1.0 - *slot;
  }

  // Reveals every pair; fails if the limit does not cover them all.
  std::optional<PairwiseWeights> materialize_all() {
    PairwiseWeights out(w_.m());
    for (int i = 0; i < w_.m(); ++i)
      for (int j = i + 1; j < w_.m(); ++j) {
        const std::optional<double> v = query(i, j);
        if (!v) return std::nullopt;
        out.set_pair(i, j, *v);
      }
    return out;
  }

  long long pairs_noised() const { return counter_.used; }
  long long query_limit() const { return *counter_.limit; }
  long long clip_count() const { return clip_count_; }
  double scale() const { return scale_; }
  NoiseKind kind() const { return kind_; }

 private:
  double draw_noise() {
    return kind_ == NoiseKind::kLaplace ? rng_.laplace(scale_) : rng_.normal(scale_);
  }

  const PairwiseWeights& w_;
  NoiseKind kind_;
  double scale_;
  Rng rng_;
  QueryCounter counter_;
  long long clip_count_ = 0;
  std::vector<std::optional<double>> cache_;
};

// Laplace answerer for q reveals under pure epsilon-DP: per-pair scale
// q / (epsilon * n), so each reveal spends epsilon / q of the budget
// (per-entry sensitivity is 1/n) and basic composition covers the run.
inline CentralAnswerer laplace_answerer(const PairwiseWeights& w,
                                        const PrivacyBudget& budget, long long q,
                                        int n, Rng rng) {
  if (!budget.pure()) throw InputError("Laplace answerer requires delta = 0");
  if (q < 1) throw InputError("query limit must be at least 1");
  if (n < 1) throw InputError("need at least one voter");
  const double scale =
      static_cast<double>(q) / (budget.epsilon * static_cast<double>(n));
  return CentralAnswerer(w, NoiseKind::kLaplace, scale, q, rng);
}

// Gaussian answerer for q reveals under (epsilon, delta)-DP: the classical
// Gaussian-mechanism bound applied to the q-reveal vector with l2-sensitivity
// sqrt(q)/n gives stddev sqrt(2 q ln(1.25/delta)) / (epsilon * n).
inline CentralAnswerer gaussian_answerer(const PairwiseWeights& w,
                                         const PrivacyBudget& budget, long long q,
                                         int n, Rng rng) {
  if (budget.pure()) throw InputError("Gaussian answerer requires delta > 0");
  if (q < 1) throw InputError("query limit must be at least 1");
  if (n < 1) throw InputError("need at least one voter");
  const double stddev =
      std::sqrt(2.0 * static_cast<double>(q) * std::log(1.25 / budget.delta)) /
      (budget.epsilon * static_cast<double>(n));
  return CentralAnswerer(w, NoiseKind::kGaussian, stddev, q, rng);
}

namespace detail {

inline CentralAnswerer make_central_answerer(const PairwiseWeights& w,
                                             const PrivacyBudget& budget,
                                             long long q, int n, Rng rng,
                                             const CentralHooks& hooks) {
  CentralAnswerer a = budget.pure() ? laplace_answerer(w, budget, q, n, rng)
                                    : gaussian_answerer(w, budget, q, n, rng);
  if (hooks.forced_scale)
    return CentralAnswerer(w, a.kind(), *hooks.forced_scale, q, rng);
  return a;
}

}  // namespace detail

// Per-run accounting, exposed so tests can assert the privacy structure.
struct CentralRunAudit {
  long long query_limit = 0;
  long long pairs_noised_primary = 0;
  double primary_epsilon = 0.0;
  double fallback_epsilon = 0.0;
  bool fallback_used = false;
  long long fallback_pairs_noised = 0;
};

// Reveals every pair through a fresh answerer (budget covers all of them by
// construction), then runs the chosen base algorithm on the noised matrix.
// The returned cost is measured against the true weights.
inline AggregationResult reduce_noise_all(const PairwiseWeights& w,
                                          const PrivacyBudget& budget, int n,
                                          BaseRanker base, Rng& rng,
                                          const CentralHooks& hooks = {},
                                          CentralRunAudit* audit = nullptr) {
  const int m = w.m();
  if (m < 2) throw InputError("need at least two items");
  const long long q = static_cast<long long>(m) * (m - 1) / 2;
  CentralAnswerer answerer =
      detail::make_central_answerer(w, budget, q, n, Rng(rng.next_u64()), hooks);
  Rng base_rng(rng.next_u64());
  const std::optional<PairwiseWeights> noised = answerer.materialize_all();
  const Ranking ranking = run_base(*noised, base, base_rng);
  if (audit) {
    audit->query_limit = q;
    audit->pairs_noised_primary = answerer.pairs_noised();
    audit->primary_epsilon = budget.epsilon;
    audit->fallback_used = false;
  }
  return AggregationResult{ranking, kemeny_cost(ranking, w),
                           answerer.pairs_noised(), /*fallback_used=*/false,
                           rng.seed()};
}

// Query-frugal aggregation: KwikSort runs against an answerer holding half
// the epsilon budget and a budget of query_budget(m, constant) reveals. If
// the budget runs out, the other half of the budget pays for a full noised
// matrix (exact search when m <= 10, else KwikSort on it).
inline AggregationResult dp_kwiksort(const PairwiseWeights& w,
                                     const PrivacyBudget& budget, int n,
                                     double constant, Rng& rng,
                                     const CentralHooks& hooks = {},
                                     CentralRunAudit* audit = nullptr) {
  const int m = w.m();
  const long long q = query_budget(m, constant);
  const PrivacyBudget half(budget.epsilon / 2.0, budget.delta);
  CentralAnswerer answerer =
      detail::make_central_answerer(w, half, q, n, Rng(rng.next_u64()), hooks);
  Rng pivot_rng(rng.next_u64());
  Rng fallback_rng(rng.next_u64());

  if (audit) {
    audit->query_limit = q;
    audit->primary_epsilon = half.epsilon;
    audit->fallback_epsilon = budget.epsilon / 2.0;
  }

  const std::optional<Ranking> sorted = kwiksort(answerer, m, pivot_rng);
  if (audit) audit->pairs_noised_primary = answerer.pairs_noised();
  if (sorted) {
    if (audit) audit->fallback_used = false;
    return AggregationResult{*sorted, kemeny_cost(*sorted, w),
                             answerer.pairs_noised(), /*fallback_used=*/false,
                             rng.seed()};
  }

  const BaseRanker fallback_base = m <= 10 ? BaseRanker::kExact : BaseRanker::kKwikSort;
  CentralRunAudit fallback_audit;
  AggregationResult fb =
      reduce_noise_all(w, PrivacyBudget(budget.epsilon / 2.0), n, fallback_base,
                       fallback_rng, hooks, &fallback_audit);
  if (audit) {
    audit->fallback_used = true;
    audit->fallback_pairs_noised = fallback_audit.pairs_noised_primary;
  }
  fb.fallback_used = true;
  fb.queries_used = answerer.pairs_noised();
  fb.seed = rng.seed();
  return fb;
}

}  // namespace dpkemeny
