// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <string>

#include "tguard/model.hpp"
#include "tguard/types.hpp"
#include "tguard/vocab.hpp"

namespace tguard {

enum class ThinkMode { kDefault, kZero, kLess };

enum class SamplerKind { kGreedy, kTopK };

struct DecodingStrategy {
  ThinkMode mode = ThinkMode::kDefault;
  SamplerKind sampler = SamplerKind::kGreedy;
  int top_k = 5;
  std::uint64_t seed = 0;
  int max_len = 160;
  int less_think_cap = 8;   // reasoning-token cap under LessThink
  int min_answer_len = 22;  // EOS is masked until the answer reaches this
};

inline std::string think_mode_name(ThinkMode m) {
  switch (m) {
    case ThinkMode::kDefault: return "DefaultThink";
    case ThinkMode::kZero: return "ZeroThink";
    case ThinkMode::kLess: return "LessThink";
  }
  return "?";
}

// Per-step logit hook; sees the generated suffix (not the prompt) and the
// raw logits, returns adjusted logits. The suppression module plugs in here.
using StepFilter = std::function<LogitVector(std::span<const TokenId> suffix,
                                             const LogitVector& logits)>;

// A generated token sequence split around the THINK delimiters.
struct Trajectory {
  TokenSeq prompt;
  TokenSeq output;             // full generated stream, delimiters included
  TokenSeq reasoning_segment;  // tokens strictly between <think> and </think>
  TokenSeq answer_segment;     // tokens after </think>, excluding <eos>
  bool truncated = false;      // hit max_len before <eos>
  bool refusal = false;        // substituted by the refusal template
  DecodingStrategy strategy;
};

namespace detail {

inline TokenId pick_greedy(const LogitVector& logits) {
  TokenId best = -1;
  double best_v = 0.0;
  for (std::size_t v = 0; v < logits.size(); ++v) {
    if (is_blocked(logits[v])) continue;
    if (best < 0 || logits[v] > best_v) {
      best = static_cast<TokenId>(v);
      best_v = logits[v];
    }
  }
  return best < 0 ? kEos : best;  // everything blocked: end the stream
}

inline TokenId pick_top_k(const LogitVector& logits, int k, std::mt19937_64& rng) {
  std::vector<TokenId> order;
  order.reserve(logits.size());
  for (std::size_t v = 0; v < logits.size(); ++v) {
    if (!is_blocked(logits[v])) order.push_back(static_cast<TokenId>(v));
  }
  if (order.empty()) return kEos;
  std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, k)), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(kk), order.end(),
                    [&](TokenId a, TokenId b) {
                      double la = logits[static_cast<std::size_t>(a)];
                      double lb = logits[static_cast<std::size_t>(b)];
                      if (la != lb) return la > lb;
                      return a < b;
                    });
  order.resize(kk);
  double mx = logits[static_cast<std::size_t>(order[0])];
  std::vector<double> w(kk);
  double sum = 0.0;
  for (std::size_t i = 0; i < kk; ++i) {
    w[i] = std::exp(logits[static_cast<std::size_t>(order[i])] - mx);
    sum += w[i];
  }
  // Inverse-CDF draw from a uint64 so results do not depend on library
  // distribution internals.
  double u = static_cast<double>(rng() >> 11) / 9007199254740992.0 * sum;
  double acc = 0.0;
  for (std::size_t i = 0; i < kk; ++i) {
    acc += w[i];
    if (u <= acc) return order[i];
  }
  return order[kk - 1];
}

}  // namespace detail

// Generates a trajectory. Think-mode structure is enforced with forced
// delimiter tokens: the output always opens with <think>; ZeroThink closes
// it immediately; LessThink force-closes after the reasoning cap. Structural
// tokens that would corrupt the stream are masked per segment, and greedy
// ties break toward the lowest token id.
inline Trajectory generate(const TokenModel& model, TokenSeq prompt,
                           const DecodingStrategy& strategy,
                           const StepFilter& filter = nullptr) {
  Trajectory traj;
  traj.strategy = strategy;
  traj.prompt = std::move(prompt);
  TokenSeq& out = traj.output;
  out.push_back(kThinkOpen);
  bool reasoning = true;
  if (strategy.mode == ThinkMode::kZero) {
    out.push_back(kThinkClose);
    reasoning = false;
  }
  std::mt19937_64 rng(strategy.seed);
  int n_reason = 0, n_answer = 0;
  bool ended = false;
  TokenSeq ctx = traj.prompt;
  ctx.insert(ctx.end(), out.begin(), out.end());
  while (static_cast<int>(out.size()) < strategy.max_len) {
    LogitVector logits = model.next_logits(ctx);
    if (filter) logits = filter(std::span<const TokenId>(out), logits);
    logits[kBos] = kBlockedLogit;
    logits[kUnk] = kBlockedLogit;
    logits[kThinkOpen] = kBlockedLogit;
    logits[kRefusal] = kBlockedLogit;
    if (reasoning) {
      logits[kEos] = kBlockedLogit;
    } else {
      logits[kThinkClose] = kBlockedLogit;
      logits[kStep] = kBlockedLogit;
      if (n_answer < strategy.min_answer_len) logits[kEos] = kBlockedLogit;
    }
    TokenId next = strategy.sampler == SamplerKind::kGreedy
                       ? detail::pick_greedy(logits)
                       : detail::pick_top_k(logits, strategy.top_k, rng);
    out.push_back(next);
    ctx.push_back(next);
    if (next == kEos) {
      ended = true;
      break;
    }
    if (reasoning) {
      if (next == kThinkClose) {
        reasoning = false;
      } else {
        ++n_reason;
        if (strategy.mode == ThinkMode::kLess && n_reason >= strategy.less_think_cap) {
          out.push_back(kThinkClose);
          ctx.push_back(kThinkClose);
          reasoning = false;
        }
      }
    } else {
      ++n_answer;
    }
  }
  traj.truncated = !ended;
  // Segment split at the forced delimiters.
  auto close_it = std::find(traj.output.begin(), traj.output.end(), kThinkClose);
  auto open_it = std::find(traj.output.begin(), traj.output.end(), kThinkOpen);
  auto reason_begin = open_it == traj.output.end() ? traj.output.begin() : open_it + 1;
  auto reason_end = close_it == traj.output.end() ? traj.output.end() : close_it;
  traj.reasoning_segment.assign(reason_begin, reason_end);
  if (close_it != traj.output.end()) {
    for (auto it = close_it + 1; it != traj.output.end(); ++it) {
      if (*it != kEos) traj.answer_segment.push_back(*it);
    }
  }
  return traj;
}

}  // namespace tguard
