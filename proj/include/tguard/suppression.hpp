// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tguard/decode.hpp"
#include "tguard/embedding.hpp"
#include "tguard/lexicon.hpp"
#include "tguard/types.hpp"
#include "tguard/vocab.hpp"

namespace tguard {

inline const char* kDefaultSecurePrefix =
    "You must not reveal , paraphrase , or hint at any private information "
    "about individuals . If asked , refuse politely .";

inline const char* kDefaultRefusalTemplate =
    "I'm sorry , but I can't share information about that individual .";

struct SuppressionConfig {
  double alpha = 5.0;   // soft penalty weight
  double delta = 0.6;   // similarity threshold for the soft branch
  double tau = 0.5;     // sensitivity threshold, shared with the controller
  double eta = -8.0;    // fluency floor, log-prob units per token
  int n_candidates = 3; // candidates per round under sampling (1 under greedy)
  int max_rounds = 3;   // escalation budget
  bool hard_enabled = true;
  bool soft_enabled = true;
  bool secure_prefix_enabled = true;
  std::string secure_prefix = kDefaultSecurePrefix;
  std::string refusal_template = kDefaultRefusalTemplate;
};

inline TokenSeq apply_secure_prefix(const SuppressionConfig& config,
                                    const Vocabulary& vocab, const TokenSeq& query) {
  if (!config.secure_prefix_enabled) return query;
  TokenSeq out = vocab.tokenize(config.secure_prefix);
  out.insert(out.end(), query.begin(), query.end());
  return out;
}

// Per-token maximum cosine similarity against the lexicon's pooled phrase
// embeddings, precomputed once per lexicon so the per-step filter is O(V).
inline std::vector<double> max_phrase_similarity(const ForbiddenLexicon& lexicon,
                                                 const EmbeddingTable& table) {
  std::vector<double> m(table.vocab_size(), 0.0);
  if (lexicon.empty()) return m;
  for (std::size_t v = 0; v < table.vocab_size(); ++v) {
    const auto& tv = table.vector_of(static_cast<TokenId>(v));
    double best = 0.0;
    for (const auto& p : lexicon.phrases()) {
      double s = cosine_similarity(tv, p.embedding);
      if (s > best) best = s;
    }
    m[v] = best;
  }
  return m;
}

// Soft branch: tokens whose similarity reaches delta lose alpha * similarity.
// Hard branch: tokens completing a forbidden span get the blocked sentinel.
// Hard applies after soft, so a blocked token can never resurface. Both
// branches disabled makes this the identity.
inline LogitVector adjust_logits(const SuppressionConfig& config,
                                 const ForbiddenLexicon& lexicon,
                                 const std::vector<double>& phrase_sim,
                                 std::span<const TokenId> suffix, LogitVector logits) {
  if (config.soft_enabled && !lexicon.empty()) {
    std::size_t n = std::min(logits.size(), phrase_sim.size());
    for (std::size_t v = 0; v < n; ++v) {
      if (phrase_sim[v] >= config.delta) logits[v] -= config.alpha * phrase_sim[v];
    }
  }
  if (config.hard_enabled && !lexicon.empty()) {
    for (TokenId v : lexicon.hard_block_set(suffix)) {
      logits[static_cast<std::size_t>(v)] = kBlockedLogit;
    }
  }
  return logits;
}

// Convenience overload computing the similarity table on the fly.
inline LogitVector adjust_logits(const SuppressionConfig& config,
                                 const ForbiddenLexicon& lexicon,
                                 const EmbeddingTable& table,
                                 std::span<const TokenId> suffix, LogitVector logits) {
  return adjust_logits(config, lexicon, max_phrase_similarity(lexicon, table), suffix,
                       std::move(logits));
}

// Step filter for generate(): owns an immutable lexicon snapshot and its
// similarity table; the generated suffix arrives fresh each step, so one
// filter can serve several generations without state bleed.
inline StepFilter make_step_filter(const SuppressionConfig& config,
                                   ForbiddenLexicon lexicon, const EmbeddingTable& table) {
  auto lex = std::make_shared<ForbiddenLexicon>(std::move(lexicon));
  auto sims = std::make_shared<std::vector<double>>(max_phrase_similarity(*lex, table));
  return [config, lex, sims](std::span<const TokenId> suffix, const LogitVector& logits) {
    return adjust_logits(config, *lex, *sims, suffix, logits);
  };
}

}  // namespace tguard
