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
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "dpkemeny/errors.hpp"

namespace dpkemeny {

// A total order on items 0..m-1, stored as a position array:
// positions()[item] = rank, 0 = most preferred. Immutable once built.
class Ranking {
 public:
  static Ranking identity(int m) {
    check_m(m);
    std::vector<int> pos(static_cast<std::size_t>(m));
    std::iota(pos.begin(), pos.end(), 0);
    return Ranking(std::move(pos), /*validated=*/true);
  }

  static Ranking reversed(int m) {
    check_m(m);
    std::vector<int> pos(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) pos[static_cast<std::size_t>(j)] = m - 1 - j;
    return Ranking(std::move(pos), /*validated=*/true);
  }

  // positions[item] = rank.
  static Ranking from_positions(std::vector<int> positions) {
    validate_permutation(positions, "position array");
    return Ranking(std::move(positions), /*validated=*/true);
  }

  // order[rank] = item, most preferred first.
  static Ranking from_order(const std::vector<int>& order) {
    validate_permutation(order, "preference order");
    std::vector<int> pos(order.size());
    for (std::size_t r = 0; r < order.size(); ++r)
      pos[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
    return Ranking(std::move(pos), /*validated=*/true);
  }

  int m() const { return static_cast<int>(positions_.size()); }

  int position_of(int item) const { return positions_[static_cast<std::size_t>(item)]; }

  bool prefers(int i, int j) const { return position_of(i) < position_of(j); }

  const std::vector<int>& positions() const { return positions_; }

  std::vector<int> to_order() const {
    std::vector<int> order(positions_.size());
    for (int item = 0; item < m(); ++item)
      order[static_cast<std::size_t>(positions_[static_cast<std::size_t>(item)])] = item;
    return order;
  }

  friend bool operator==(const Ranking& a, const Ranking& b) {
    return a.positions_ == b.positions_;
  }
  friend bool operator!=(const Ranking& a, const Ranking& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Ranking& r) {
    os << "positions(";
    for (int j = 0; j < r.m(); ++j) os << (j ? "," : "") << r.position_of(j);
    return os << ")";
  }

 private:
  Ranking(std::vector<int> positions, bool) : positions_(std::move(positions)) {}

  static void check_m(int m) {
    if (m < 1) throw InputError("ranking needs at least one item");
  }

  static void validate_permutation(const std::vector<int>& v, const char* what) {
    if (v.empty()) throw InputError(std::string(what) + " must be nonempty");
    std::vector<bool> seen(v.size(), false);
    for (int x : v) {
      if (x < 0 || x >= static_cast<int>(v.size()) || seen[static_cast<std::size_t>(x)])
        throw InputError(std::string(what) + " is not a permutation of 0.." +
                         std::to_string(v.size() - 1));
      seen[static_cast<std::size_t>(x)] = true;
    }
  }

  std::vector<int> positions_;
};

// A multiset of n voters' rankings over a common item set.
class RankingProfile {
 public:
  explicit RankingProfile(std::vector<Ranking> rankings)
      : rankings_(std::move(rankings)) {
    if (rankings_.empty()) throw InputError("profile needs at least one voter");
    const int m = rankings_.front().m();
    for (const Ranking& r : rankings_)
      if (r.m() != m) throw InputError("profile mixes item counts");
  }

  int m() const { return rankings_.front().m(); }
  int n() const { return static_cast<int>(rankings_.size()); }
  const std::vector<Ranking>& rankings() const { return rankings_; }
  const Ranking& voter(int k) const { return rankings_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<Ranking> rankings_;
};

// Pairwise preference fractions: at(i, j) = fraction of voters preferring i
// over j. Off-diagonal entries satisfy at(i,j) + at(j,i) = 1 exactly; the
// diagonal is unused.
class PairwiseWeights {
 public:
  explicit PairwiseWeights(int m)
      : m_(m), w_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.5) {
    if (m < 1) throw InputError("weight matrix needs at least one item");
    for (int i = 0; i < m; ++i) w_[idx(i, i)] = 0.0;
  }

  // Validates the probability constraint up to a 1e-9 absolute tolerance.
  static PairwiseWeights from_matrix(const std::vector<std::vector<double>>& rows) {
    const int m = static_cast<int>(rows.size());
    PairwiseWeights w(m);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != m)
        throw InputError("weight matrix is not square");
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        const double v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (v < 0.0 || v > 1.0) throw InputError("weight entry outside [0,1]");
        w.w_[w.idx(i, j)] = v;
      }
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (std::abs(w.at(i, j) + w.at(j, i) - 1.0) > 1e-9)
          throw InputError("weight matrix violates the probability constraint");
    return w;
  }

  int m() const { return m_; }

  double at(int i, int j) const {
    if (i == j) throw InputError("diagonal weight entries are undefined");
    return w_[idx(i, j)];
  }

  // Sets the unordered pair {i, j}: at(i,j) = wij, at(j,i) = 1 - wij. The
  // complement is formed explicitly so the probability constraint holds
  // exactly in floating point.
  void set_pair(int i, int j, double wij) {
    if (i == j) throw InputError("cannot set a diagonal weight entry");
    if (wij < 0.0 || wij > 1.0) throw InputError("weight entry outside [0,1]");
    w_[idx(i, j)] = wij;
    w_[idx(j, i)] = 1.0 - wij;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
           static_cast<std::size_t>(j);
  }

  int m_;
  std::vector<double> w_;
};

// Output of an aggregation run, with enough bookkeeping to audit it.
struct AggregationResult {
  Ranking ranking;
  double cost = 0.0;        // Kemeny score against the true weights
  long long queries_used = 0;
  bool fallback_used = false;
  std::uint64_t seed = 0;
};

// Number of pairwise disagreements between two rankings. Counted as the
// inversions of b's positions taken in a's preference order (merge count),
// which is O(m log m).
inline long long kendall_tau(const Ranking& a, const Ranking& b) {
  if (a.m() != b.m()) throw InputError("kendall_tau: item counts differ");
  const int m = a.m();
  std::vector<int> seq(static_cast<std::size_t>(m));
  for (int item = 0; item < m; ++item)
    seq[static_cast<std::size_t>(a.position_of(item))] = b.position_of(item);

  long long inversions = 0;
  std::vector<int> buf(seq.size());
  for (std::size_t width = 1; width < seq.size(); width *= 2) {
    for (std::size_t lo = 0; lo + width < seq.size(); lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, seq.size());
      std::size_t l = lo, r = mid, out = lo;
      while (l < mid && r < hi) {
        if (seq[l] <= seq[r]) {
          buf[out++] = seq[l++];
        } else {
          inversions += static_cast<long long>(mid - l);
          buf[out++] = seq[r++];
        }
      }
      while (l < mid) buf[out++] = seq[l++];
      while (r < hi) buf[out++] = seq[r++];
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                buf.begin() + static_cast<std::ptrdiff_t>(hi),
                seq.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return inversions;
}

// Pairwise preference fractions of a profile. Integer counts are formed
// first and divided once, so entries are exact multiples of 1/n.
inline PairwiseWeights build_weights(const RankingProfile& profile) {
  const int m = profile.m();
  PairwiseWeights w(m);
  std::vector<long long> cnt(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0);
  for (const Ranking& r : profile.rankings())
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        if (r.prefers(i, j))
          ++cnt[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
                static_cast<std::size_t>(j)];
      }
  const double n = static_cast<double>(profile.n());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      w.set_pair(i, j,
                 static_cast<double>(cnt[static_cast<std::size_t>(i) *
                                             static_cast<std::size_t>(m) +
                                         static_cast<std::size_t>(j)]) /
                     n);
  return w;
}

// Kemeny score of sigma against a weight matrix: for every ordered pair
// (i, j) with i ranked before j, add the fraction preferring j over i.
// Summed over i < j pair slots in a fixed order, so the value is
// deterministic for a given sigma.
inline double kemeny_cost(const Ranking& sigma, const PairwiseWeights& w) {
  if (sigma.m() != w.m()) throw InputError("kemeny_cost: item counts differ");
  const int m = w.m();
  double cost = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      cost += sigma.prefers(i, j) ? w.at(j, i) : w.at(i, j);
  return cost;
}

inline double kemeny_cost(const Ranking& sigma, const RankingProfile& profile) {
  return kemeny_cost(sigma, build_weights(profile));
}

// Exact Kemeny minimizer by enumerating all m! preference orders.
// Ties break toward the lexicographically smallest position array.
// Refuses m > 10 rather than silently approximating.
inline AggregationResult opt_bruteforce(const PairwiseWeights& w) {
  const int m = w.m();
  if (m > 10)
    throw GuardError("opt_bruteforce supports at most 10 items (got " +
                     std::to_string(m) + ")");
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);

  std::vector<int> pos(static_cast<std::size_t>(m));
  std::vector<int> best_pos;
  double best_cost = 0.0;
  bool first = true;
  do {
    for (int r = 0; r < m; ++r) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
    double cost = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        cost += pos[static_cast<std::size_t>(i)] < pos[static_cast<std::size_t>(j)]
                    ? w.at(j, i)
                    : w.at(i, j);
    if (first || cost < best_cost || (cost == best_cost && pos < best_pos)) {
      best_cost = cost;
      best_pos = pos;
      first = false;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  AggregationResult result{Ranking::from_positions(best_pos), best_cost,
                           /*queries_used=*/static_cast<long long>(m) * (m - 1) / 2,
                           /*fallback_used=*/false, /*seed=*/0};
  return result;
}

inline AggregationResult opt_bruteforce(const RankingProfile& profile) {
  return opt_bruteforce(build_weights(profile));
}

}  // namespace dpkemeny
