// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace tguard {

using TokenId = std::int32_t;
using TokenSeq = std::vector<TokenId>;

// Unnormalized per-token scores, length == vocabulary size.
using LogitVector = std::vector<double>;

// Adjusted-logit value standing in for -inf. Most-negative finite double so
// softmax and sorting stay well-defined; softmax weight underflows to zero.
inline constexpr double kBlockedLogit = std::numeric_limits<double>::lowest();

inline bool is_blocked(double logit) { return logit <= kBlockedLogit / 2; }

}  // namespace tguard
