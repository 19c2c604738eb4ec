// Copyright 2026 The garec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace garec::testing {

Corpus corpus_from_csv(const std::string& transcripts) {
  std::istringstream in(transcripts);
  return parse_transcripts(in);
}

Corpus corpus_from_csv(const std::string& transcripts, const std::string& offerings) {
  std::istringstream t(transcripts);
  std::istringstream o(offerings);
  return parse_transcripts(t, o);
}

std::vector<double> jacobi_singular_values(const Eigen::MatrixXd& a) {
  const auto n = static_cast<std::size_t>(a.cols());
  std::vector<std::vector<long double>> g(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0.0L;
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        s += static_cast<long double>(a(r, static_cast<Eigen::Index>(i))) * a(r, static_cast<Eigen::Index>(j));
      }
      g[i][j] = s;
    }
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0.0L;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += g[p][q] * g[p][q];
    }
    if (off < 1e-36L) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(g[p][q]) < 1e-40L) continue;
        const long double theta = (g[q][q] - g[p][p]) / (2.0L * g[p][q]);
        const long double t = (theta >= 0 ? 1.0L : -1.0L) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0L));
        const long double c = 1.0L / std::sqrt(t * t + 1.0L);
        const long double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const long double gkp = g[k][p];
          const long double gkq = g[k][q];
          g[k][p] = c * gkp - s * gkq;
          g[k][q] = s * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const long double gpk = g[p][k];
          const long double gqk = g[q][k];
          g[p][k] = c * gpk - s * gqk;
          g[q][k] = s * gpk + c * gqk;
        }
      }
    }
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(std::sqrt(std::max(0.0L, g[i][i])));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double pair_count_u(std::span<const double> first, std::span<const double> second) {
  double u = 0.0;
  for (double x : first) {
    for (double y : second) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  }
  return u;
}

double brute_force_mann_whitney_p(std::span<const double> first, std::span<const double> second) {
  std::vector<double> pooled(first.begin(), first.end());
  pooled.insert(pooled.end(), second.begin(), second.end());
  const std::size_t n = pooled.size();
  const std::size_t k = first.size();
  const double observed = pair_count_u(first, second);
  std::vector<int> pick(n, 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), 1);
  std::sort(pick.begin(), pick.end());
  std::size_t total = 0;
  std::size_t extreme = 0;
  do {
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < n; ++i) (pick[i] ? a : b).push_back(pooled[i]);
    ++total;
    if (pair_count_u(a, b) >= observed - 1e-9) ++extreme;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

double max_relative_error(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0;
  double scale = 1e-8;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::fabs(a[i] - b[i]));
    scale = std::max(scale, std::fabs(b[i]));
  }
  return diff / scale;
}

}  // namespace garec::testing
