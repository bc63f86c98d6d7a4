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

#include <vector>

#include "dpkemeny/ranking.hpp"
#include "dpkemeny/rng.hpp"
#include "dpkemeny/sampling.hpp"

namespace dpkemeny::testing {

// Independent O(m^2) oracle for the pairwise-disagreement count, kept
// deliberately separate from the library's merge-count implementation.
inline long long kendall_tau_bruteforce(const Ranking& a, const Ranking& b) {
  long long disagreements = 0;
  for (int i = 0; i < a.m(); ++i)
    for (int j = i + 1; j < a.m(); ++j)
      if (a.prefers(i, j) != b.prefers(i, j)) ++disagreements;
  return disagreements;
}

// The four rankings of the worked five-item example (items 0..4).
inline RankingProfile example_office_profile() {
  return RankingProfile({
      Ranking::from_order({0, 1, 2, 3, 4}),
      Ranking::from_order({4, 0, 2, 3, 1}),
      Ranking::from_order({2, 3, 1, 0, 4}),
      Ranking::from_order({0, 1, 3, 2, 4}),
  });
}

inline RankingProfile unanimous_profile(const Ranking& r, int n) {
  return RankingProfile(std::vector<Ranking>(static_cast<std::size_t>(n), r));
}

}  // namespace dpkemeny::testing
