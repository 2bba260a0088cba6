// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tguard/corpus.hpp"
#include "tguard/types.hpp"
#include "tguard/vocab.hpp"

namespace tguard {

// Anything that maps a token context to a logit vector over a fixed
// vocabulary. Implementations must be safe for concurrent reads.
class TokenModel {
 public:
  virtual ~TokenModel() = default;
  virtual std::size_t vocab_size() const = 0;
  virtual LogitVector next_logits(std::span<const TokenId> context) const = 0;
};

// Training stream of one record: question || <think> cot </think> answer <eos>.
inline TokenSeq record_stream(const Vocabulary& vocab, const Record& r) {
  TokenSeq s = vocab.tokenize(r.question);
  s.push_back(kThinkOpen);
  TokenSeq cot = vocab.tokenize(r.cot);
  s.insert(s.end(), cot.begin(), cot.end());
  s.push_back(kThinkClose);
  TokenSeq ans = vocab.tokenize(r.answer);
  s.insert(s.end(), ans.begin(), ans.end());
  s.push_back(kEos);
  return s;
}

// Order-k n-gram counts with add-delta smoothing:
//   logit(v | ctx) = log((count(ctx, v) + delta) / (total(ctx) + delta * V)).
// Contexts shorter than k-1 are BOS-padded. Immutable after training.
class NGramModel : public TokenModel {
 public:
  NGramModel() = default;

  static NGramModel train(const Vocabulary& vocab, const std::vector<Record>& corpus,
                          int order, double delta_lm = 1.0) {
    if (order < 2) throw ConfigError("n-gram order must be >= 2");
    if (corpus.empty()) throw ConfigError("cannot train on an empty corpus");
    std::vector<TokenSeq> streams;
    streams.reserve(corpus.size());
    for (const auto& r : corpus) streams.push_back(record_stream(vocab, r));
    return train_streams(streams, order, vocab.size(), delta_lm);
  }

  static NGramModel train_streams(const std::vector<TokenSeq>& streams, int order,
                                  std::size_t vocab_size, double delta_lm = 1.0) {
    if (order < 2) throw ConfigError("n-gram order must be >= 2");
    if (streams.empty()) throw ConfigError("cannot train on an empty corpus");
    NGramModel m;
    m.order_ = order;
    m.vocab_size_ = vocab_size;
    m.delta_ = delta_lm;
    const std::size_t ctx_len = static_cast<std::size_t>(order - 1);
    for (const auto& raw : streams) {
      TokenSeq s(ctx_len, kBos);
      s.insert(s.end(), raw.begin(), raw.end());
      for (std::size_t i = ctx_len; i < s.size(); ++i) {
        TokenSeq ctx(s.begin() + static_cast<long>(i - ctx_len),
                     s.begin() + static_cast<long>(i));
        auto& table = m.counts_[ctx];
        ++table[s[i]];
        ++m.totals_[ctx];
      }
    }
    return m;
  }

  std::size_t vocab_size() const override { return vocab_size_; }
  int order() const { return order_; }
  double smoothing() const { return delta_; }

  LogitVector next_logits(std::span<const TokenId> context) const override {
    TokenSeq ctx = padded_context(context);
    auto tot = totals_.find(ctx);
    double total = tot == totals_.end() ? 0.0 : static_cast<double>(tot->second);
    double denom = total + delta_ * static_cast<double>(vocab_size_);
    LogitVector out(vocab_size_, std::log(delta_ / denom));
    if (tot != totals_.end()) {
      const auto& table = counts_.at(ctx);
      for (const auto& [tok, c] : table) {
        out[static_cast<std::size_t>(tok)] =
            std::log((static_cast<double>(c) + delta_) / denom);
      }
    }
    return out;
  }

  std::uint64_t count(const TokenSeq& ctx, TokenId next) const {
    auto it = counts_.find(ctx);
    if (it == counts_.end()) return 0;
    auto jt = it->second.find(next);
    return jt == it->second.end() ? 0 : jt->second;
  }

  std::uint64_t total(const TokenSeq& ctx) const {
    auto it = totals_.find(ctx);
    return it == totals_.end() ? 0 : it->second;
  }

  // Flat count-table file: header line "order delta vocab", then one line
  // per entry: context ids, next id, count.
  void save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write model: " + path);
    f << order_ << ' ' << delta_ << ' ' << vocab_size_ << '\n';
    for (const auto& [ctx, table] : counts_) {
      for (const auto& [tok, c] : table) {
        for (TokenId t : ctx) f << t << ' ';
        f << tok << ' ' << c << '\n';
      }
    }
  }

  static NGramModel load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read model: " + path);
    NGramModel m;
    if (!(f >> m.order_ >> m.delta_ >> m.vocab_size_)) {
      throw std::runtime_error("model header malformed: " + path);
    }
    const std::size_t ctx_len = static_cast<std::size_t>(m.order_ - 1);
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      TokenSeq ctx(ctx_len);
      TokenId tok;
      std::uint64_t c;
      for (auto& t : ctx) ss >> t;
      if (!(ss >> tok >> c)) throw std::runtime_error("model row malformed: " + path);
      m.counts_[ctx][tok] = c;
      m.totals_[ctx] += c;
    }
    return m;
  }

 private:
  TokenSeq padded_context(std::span<const TokenId> context) const {
    const std::size_t ctx_len = static_cast<std::size_t>(order_ - 1);
    TokenSeq ctx;
    if (context.size() >= ctx_len) {
      ctx.assign(context.end() - static_cast<long>(ctx_len), context.end());
    } else {
      ctx.assign(ctx_len - context.size(), kBos);
      ctx.insert(ctx.end(), context.begin(), context.end());
    }
    return ctx;
  }

  struct SeqHash {
    std::size_t operator()(const TokenSeq& s) const {
      std::size_t h = 1469598103934665603ull;
      for (TokenId t : s) {
        h ^= static_cast<std::size_t>(t) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
      }
      return h;
    }
  };

  int order_ = 2;
  std::size_t vocab_size_ = 0;
  double delta_ = 1.0;
  std::unordered_map<TokenSeq, std::map<TokenId, std::uint64_t>, SeqHash> counts_;
  std::unordered_map<TokenSeq, std::uint64_t, SeqHash> totals_;
};

}  // namespace tguard
