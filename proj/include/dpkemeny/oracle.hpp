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

#include <optional>

#include "dpkemeny/errors.hpp"
#include "dpkemeny/ranking.hpp"

namespace dpkemeny {

// Query budget: at most `limit` answered queries when a limit is set.
// Query limit+1 is refused before any answer is produced.
struct QueryCounter {
  long long used = 0;
  std::optional<long long> limit;

  bool try_consume() {
    if (limit && used >= *limit) return false;
    ++used;
    return true;
  }
};

// On-demand access to estimated pairwise fractions. query(j, i) asks for the
// fraction of voters preferring j over i; nullopt signals a failed query
// (budget exhausted). Answers within one run are consistent: repeating the
// same query returns the same value.
class WeightOracle {
 public:
  virtual ~WeightOracle() = default;
  virtual std::optional<double> query(int j, int i) = 0;
};

// Noise-free oracle over a fixed weight matrix, with optional query budget.
class ExactOracle : public WeightOracle {
 public:
  explicit ExactOracle(const PairwiseWeights& w,
                       std::optional<long long> limit = std::nullopt)
      : w_(w) {
    counter_.limit = limit;
  }

  std::optional<double> query(int j, int i) override {
    if (!counter_.try_consume()) return std::nullopt;
    return w_.at(j, i);
  }

  long long queries_used() const { return counter_.used; }

 private:
  const PairwiseWeights& w_;
  QueryCounter counter_;
};

}  // namespace dpkemeny
