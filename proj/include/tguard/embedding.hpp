// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "tguard/corpus.hpp"
#include "tguard/model.hpp"
#include "tguard/types.hpp"
#include "tguard/vocab.hpp"

namespace tguard {

inline double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  double dot = 0.0, nu = 0.0, nv = 0.0;
  std::size_t n = std::min(u.size(), v.size());
  for (std::size_t i = 0; i < n; ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;  // zero vector: similarity 0 by convention
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

// Co-occurrence token embeddings: counts of context tokens within a +-2
// window over the corpus streams, L2-row-normalized, sign-projected to
// d = min(V, 192), then mixed with an identity component so distinct tokens
// in identical template slots stay separable. Special tokens keep zero
// vectors; they are structure, not content.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  static constexpr double kIdentityMix = 0.2;

  static EmbeddingTable build(const Vocabulary& vocab, const std::vector<Record>& corpus,
                              std::uint64_t seed, std::size_t max_dim = 192) {
    const std::size_t V = vocab.size();
    EmbeddingTable table;
    table.dim_ = std::min(V, max_dim);
    table.vectors_.assign(V, std::vector<double>(table.dim_, 0.0));

    std::vector<std::unordered_map<TokenId, double>> rows(V);
    for (const auto& r : corpus) {
      TokenSeq toks = vocab.tokenize(r.question);
      toks.push_back(kThinkOpen);
      TokenSeq c = vocab.tokenize(r.cot);
      toks.insert(toks.end(), c.begin(), c.end());
      toks.push_back(kThinkClose);
      TokenSeq a = vocab.tokenize(r.answer);
      toks.insert(toks.end(), a.begin(), a.end());
      for (std::size_t i = 0; i < toks.size(); ++i) {
        if (is_special(toks[i])) continue;
        std::size_t lo = i >= 2 ? i - 2 : 0;
        std::size_t hi = std::min(toks.size(), i + 3);
        for (std::size_t j = lo; j < hi; ++j) {
          if (j == i || is_special(toks[j])) continue;
          rows[static_cast<std::size_t>(toks[i])][toks[j]] += 1.0;
        }
      }
    }

    // Deterministic +-1 sign matrix, one row per vocabulary token.
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> signs(V, std::vector<double>(table.dim_));
    for (auto& row : signs) {
      for (auto& x : row) x = (rng() & 1ull) ? 1.0 : -1.0;
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(table.dim_));

    for (std::size_t t = 0; t < V; ++t) {
      if (rows[t].empty()) continue;
      double norm = 0.0;
      for (const auto& [k, v] : rows[t]) norm += v * v;
      norm = std::sqrt(norm);
      std::vector<double> ctx(table.dim_, 0.0);
      for (const auto& [k, v] : rows[t]) {
        const auto& srow = signs[static_cast<std::size_t>(k)];
        double w = v / norm;
        for (std::size_t d = 0; d < table.dim_; ++d) ctx[d] += w * srow[d] * scale;
      }
      auto& vec = table.vectors_[t];
      double n2 = 0.0;
      for (std::size_t d = 0; d < table.dim_; ++d) {
        vec[d] = (1.0 - kIdentityMix) * ctx[d] + kIdentityMix * signs[t][d] * scale;
        n2 += vec[d] * vec[d];
      }
      n2 = std::sqrt(n2);
      if (n2 > 0) {
        for (auto& x : vec) x /= n2;
      }
    }
    return table;
  }

  std::size_t dim() const { return dim_; }
  std::size_t vocab_size() const { return vectors_.size(); }

  const std::vector<double>& vector_of(TokenId id) const {
    return vectors_.at(static_cast<std::size_t>(id));
  }

  // Mean of token vectors; empty input pools to the zero vector.
  std::vector<double> embed_tokens(std::span<const TokenId> ids) const {
    std::vector<double> out(dim_, 0.0);
    if (ids.empty()) return out;
    for (TokenId t : ids) {
      const auto& v = vector_of(t);
      for (std::size_t d = 0; d < dim_; ++d) out[d] += v[d];
    }
    for (auto& x : out) x /= static_cast<double>(ids.size());
    return out;
  }

  std::vector<double> embed_text(const Vocabulary& vocab, std::string_view text) const {
    return embed_tokens(vocab.tokenize(text));
  }

  // Binary matrix file: uint32 dim, uint32 vocab size, doubles row-major.
  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write embeddings: " + path);
    std::uint32_t d = static_cast<std::uint32_t>(dim_);
    std::uint32_t v = static_cast<std::uint32_t>(vectors_.size());
    f.write(reinterpret_cast<const char*>(&d), sizeof(d));
    f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    for (const auto& row : vectors_) {
      f.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
  }

  static EmbeddingTable load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read embeddings: " + path);
    std::uint32_t d = 0, v = 0;
    f.read(reinterpret_cast<char*>(&d), sizeof(d));
    f.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!f) throw std::runtime_error("embedding header malformed: " + path);
    EmbeddingTable t;
    t.dim_ = d;
    t.vectors_.assign(v, std::vector<double>(d, 0.0));
    for (auto& row : t.vectors_) {
      f.read(reinterpret_cast<char*>(row.data()),
             static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!f) throw std::runtime_error("embedding matrix truncated: " + path);
    return t;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<double>> vectors_;
};

}  // namespace tguard
