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
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dpkemeny/errors.hpp"
#include "dpkemeny/ranking.hpp"

namespace dpkemeny {

// Profile CSV format: one row per voter, comma-separated item ids in
// preference order (most preferred first). Optional first line "# m=<m>".

inline RankingProfile read_profile_csv(std::istream& in) {
  std::vector<Ranking> rankings;
  std::string line;
  int m = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (lineno == 1 && line.rfind("# m=", 0) == 0) {
        const std::string val = line.substr(4);
        int parsed = 0;
        const auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), parsed);
        if (ec != std::errc() || p != val.data() + val.size() || parsed < 1)
          throw InputError("line 1: malformed '# m=<m>' header");
        m = parsed;
      }
      continue;  // other comment lines are ignored
    }
    std::vector<int> order;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) {
      int id = 0;
      const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), id);
      if (ec != std::errc() || p != field.data() + field.size())
        throw InputError("line " + std::to_string(lineno) + ": '" + field +
                         "' is not an item id");
      order.push_back(id);
    }
    if (m >= 0 && static_cast<int>(order.size()) != m)
      throw InputError("line " + std::to_string(lineno) + ": expected " +
                       std::to_string(m) + " items, got " +
                       std::to_string(order.size()));
    if (m < 0) m = static_cast<int>(order.size());
    try {
      rankings.push_back(Ranking::from_order(order));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (rankings.empty()) throw InputError("profile file contains no rankings");
  return RankingProfile(std::move(rankings));
}

inline RankingProfile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile file: " + path);
  return read_profile_csv(in);
}

inline void write_profile_csv(std::ostream& out, const RankingProfile& profile) {
  out << "# m=" << profile.m() << "\n";
  for (const Ranking& r : profile.rankings()) {
    const std::vector<int> order = r.to_order();
    for (std::size_t k = 0; k < order.size(); ++k)
      out << (k ? "," : "") << order[k];
    out << "\n";
  }
}

inline void write_profile_csv(const std::string& path, const RankingProfile& profile) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  write_profile_csv(out, profile);
}

}  // namespace dpkemeny
