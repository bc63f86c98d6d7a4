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
#include <vector>

#include "dpkemeny/errors.hpp"
#include "dpkemeny/ranking.hpp"

namespace dpkemeny {

namespace detail {

inline void validate_sign_vector(const std::vector<int>& x, int d) {
  if (static_cast<int>(x.size()) != d)
    throw InputError("sign vector length does not match d");
  for (const int v : x)
    if (v != 1 && v != -1) throw InputError("sign vector entries must be +1 or -1");
}

}  // namespace detail

// Embeds a sign vector x in {-1,+1}^d as a ranking on 2d + t items: the
// middle block d..d+t-1 stays fixed, and items j and j+d+t swap positions
// exactly when x[j] = -1. (Items are 0-indexed here.)
inline Ranking embed_pi(const std::vector<int>& x, int d, int t) {
  if (d < 1 || t < 1) throw InputError("embed_pi requires d >= 1 and t >= 1");
  detail::validate_sign_vector(x, d);
  const int m = 2 * d + t;
  std::vector<int> pos(static_cast<std::size_t>(m));
  for (int mid = d; mid < d + t; ++mid) pos[static_cast<std::size_t>(mid)] = mid;
  for (int j = 0; j < d; ++j) {
    const int partner = j + d + t;
    if (x[static_cast<std::size_t>(j)] == 1) {
      pos[static_cast<std::size_t>(j)] = j;
      pos[static_cast<std::size_t>(partner)] = partner;
    } else {
      pos[static_cast<std::size_t>(j)] = partner;
      pos[static_cast<std::size_t>(partner)] = j;
    }
  }
  return Ranking::from_positions(pos);
}

// Reads the sign vector back out of a ranking on 2d + t items:
// result[j] = -1 when item j is ranked before item j+d+t, else +1.
// For the embedding above this recovers the negated vector:
// recover_rho(embed_pi(x)) == -x.
inline std::vector<int> recover_rho(const Ranking& sigma, int d, int t) {
  if (d < 1 || t < 1) throw InputError("recover_rho requires d >= 1 and t >= 1");
  if (sigma.m() != 2 * d + t)
    throw InputError("ranking size does not match 2d + t");
  std::vector<int> x(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j)
    x[static_cast<std::size_t>(j)] = sigma.prefers(j, j + d + t) ? -1 : 1;
  return x;
}

// n sign vectors in {-1,+1}^d, embedded into rankings on 2d + t items.
struct MarginalInstance {
  int d = 0;
  int t = 0;
  std::vector<std::vector<int>> x_vectors;

  MarginalInstance(int d_, int t_, std::vector<std::vector<int>> xs)
      : d(d_), t(t_), x_vectors(std::move(xs)) {
    if (d < 1 || t < 1) throw InputError("instance requires d >= 1 and t >= 1");
    if (x_vectors.empty()) throw InputError("instance needs at least one vector");
    for (const auto& x : x_vectors) detail::validate_sign_vector(x, d);
  }

  int n() const { return static_cast<int>(x_vectors.size()); }
  int items() const { return 2 * d + t; }
};

// Both inequality checks, evaluated in exact integer arithmetic (all
// quantities are rationals over the common denominator 2n).
struct ObservationReport {
  double mean_kendall = 0.0;  // shared left-hand side
  double lower_rhs = 0.0;     // mean_kendall must be >= this
  bool lower_holds = false;
  bool has_upper = false;     // only when the embedded y is supplied
  double upper_rhs = 0.0;     // mean_kendall must be <= this
  bool upper_holds = false;
};

// Checks that the mean Kendall distance from sigma to the embedded instance
// is at least t*(d/2 - <w, mean(x)>/2), where w is the negated recovered
// vector of sigma. When y is supplied, sigma must equal embed_pi(y) and the
// matching upper bound t*(d/2 - <y, mean(x)>/2) + 2d^2 is checked as well.
inline ObservationReport check_observations(
    const MarginalInstance& inst, const Ranking& sigma,
    const std::optional<std::vector<int>>& y = std::nullopt) {
  const int d = inst.d;
  const int t = inst.t;
  if (sigma.m() != inst.items())
    throw InputError("ranking size does not match the instance");

  const long long n = inst.n();
  long long kendall_sum = 0;
  std::vector<long long> x_sum(static_cast<std::size_t>(d), 0);
  for (const auto& x : inst.x_vectors) {
    kendall_sum += kendall_tau(sigma, embed_pi(x, d, t));
    for (int j = 0; j < d; ++j) x_sum[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(j)];
  }

  const std::vector<int> rho = recover_rho(sigma, d, t);
  long long inner_w = 0;  // <-rho(sigma), sum of x vectors>
  for (int j = 0; j < d; ++j)
    inner_w += static_cast<long long>(-rho[static_cast<std::size_t>(j)]) *
               x_sum[static_cast<std::size_t>(j)];

  ObservationReport report;
  const long long lhs_2n = 2 * kendall_sum;
  const long long lower_rhs_2n =
      static_cast<long long>(t) * (static_cast<long long>(d) * n - inner_w);
  report.mean_kendall = static_cast<double>(kendall_sum) / static_cast<double>(n);
  report.lower_rhs = static_cast<double>(lower_rhs_2n) / (2.0 * static_cast<double>(n));
  report.lower_holds = lhs_2n >= lower_rhs_2n;

  if (y) {
    detail::validate_sign_vector(*y, d);
    if (!(sigma == embed_pi(*y, d, t)))
      throw InputError("upper-bound check requires sigma == embed_pi(y)");
    long long inner_y = 0;
    for (int j = 0; j < d; ++j)
      inner_y += static_cast<long long>((*y)[static_cast<std::size_t>(j)]) *
                 x_sum[static_cast<std::size_t>(j)];
    const long long upper_rhs_2n =
        static_cast<long long>(t) * (static_cast<long long>(d) * n - inner_y) +
        4LL * d * d * n;
    report.has_upper = true;
    report.upper_rhs = static_cast<double>(upper_rhs_2n) / (2.0 * static_cast<double>(n));
    report.upper_holds = lhs_2n <= upper_rhs_2n;
  }
  return report;
}

}  // namespace dpkemeny
