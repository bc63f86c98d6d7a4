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

#include <numeric>
#include <utility>
#include <vector>

#include "dpkemeny/errors.hpp"
#include "dpkemeny/ranking.hpp"
#include "dpkemeny/rng.hpp"

namespace dpkemeny {

// Uniformly random ranking (Fisher-Yates on the preference order).
inline Ranking random_ranking(int m, Rng& rng) {
  if (m < 1) throw InputError("ranking needs at least one item");
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  for (int k = m - 1; k > 0; --k) {
    const int r = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k) + 1));
    std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(r)]);
  }
  return Ranking::from_order(order);
}

// One Mallows(center, phi) draw by repeated insertion: the items of the
// center ranking are inserted in preference order, and inserting the k-th
// item r slots away from the end has probability phi^r (normalized). r is
// exactly the number of disagreements the insertion creates, so the chain
// realizes P(pi) proportional to phi^K(pi, center).
inline Ranking mallows_draw(const Ranking& center, double phi, Rng& rng) {
  if (!(phi > 0.0) || phi > 1.0) throw InputError("phi must lie in (0, 1]");
  const std::vector<int> center_order = center.to_order();
  const int m = center.m();
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    double total = 0.0;
    double pw = 1.0;
    for (int r = 0; r <= k; ++r) {
      total += pw;
      pw *= phi;
    }
    const double u = rng.uniform01() * total;
    double acc = 0.0;
    int displacement = k;
    pw = 1.0;
    for (int r = 0; r <= k; ++r) {
      acc += pw;
      if (u < acc) {
        displacement = r;
        break;
      }
      pw *= phi;
    }
    order.insert(order.begin() + (k - displacement), center_order[static_cast<std::size_t>(k)]);
  }
  return Ranking::from_order(order);
}

inline RankingProfile mallows_sample(const Ranking& center, double phi, int n, Rng& rng) {
  if (n < 1) throw InputError("profile needs at least one voter");
  std::vector<Ranking> rankings;
  rankings.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) rankings.push_back(mallows_draw(center, phi, rng));
  return RankingProfile(std::move(rankings));
}

inline RankingProfile uniform_profile(int m, int n, Rng& rng) {
  if (n < 1) throw InputError("profile needs at least one voter");
  std::vector<Ranking> rankings;
  rankings.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) rankings.push_back(random_ranking(m, rng));
  return RankingProfile(std::move(rankings));
}

}  // namespace dpkemeny
