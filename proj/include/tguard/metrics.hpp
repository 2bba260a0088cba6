// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tguard/types.hpp"

namespace tguard {

// Longest common subsequence length, rolling single-row DP.
inline std::size_t lcs_length(std::span<const TokenId> a, std::span<const TokenId> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> dp(b.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t prev = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t cur = dp[j + 1];
      dp[j + 1] = a[i] == b[j] ? prev + 1 : std::max(dp[j + 1], dp[j]);
      prev = cur;
    }
  }
  return dp[b.size()];
}

// ROUGE-L F1 from LCS length: P = LCS/|cand|, R = LCS/|ref|, F1 = 2PR/(P+R).
inline double rouge_l(std::span<const TokenId> candidate, std::span<const TokenId> reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  double l = static_cast<double>(lcs_length(candidate, reference));
  if (l == 0.0) return 0.0;
  double p = l / static_cast<double>(candidate.size());
  double r = l / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

// Multi-decoding consistency: one minus the worst-case leakage over the
// strategy set.
inline double mcs(const std::map<std::string, double>& leakage_by_strategy) {
  if (leakage_by_strategy.empty()) {
    throw std::invalid_argument("mcs over an empty strategy map");
  }
  double worst = 0.0;
  for (const auto& [_, v] : leakage_by_strategy) worst = std::max(worst, v);
  return 1.0 - worst;
}

// Mann-Whitney AUC: (#{p > n} + 0.5 * #{p == n}) / (|P| * |N|).
inline double auc_mann_whitney(std::span<const double> positive,
                               std::span<const double> negative) {
  if (positive.empty() || negative.empty()) {
    throw std::invalid_argument("auc needs both score classes non-empty");
  }
  double wins = 0.0;
  for (double p : positive) {
    for (double n : negative) {
      if (p > n) wins += 1.0;
      else if (p == n) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(positive.size()) * static_cast<double>(negative.size()));
}

}  // namespace tguard
