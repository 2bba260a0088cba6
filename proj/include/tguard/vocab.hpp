// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tguard/types.hpp"

namespace tguard {

// Fixed special-token ids. EOS sits at id 0 and THINK_CLOSE below STEP so
// that lowest-id tie-breaking at uniform logits ends a segment cleanly
// instead of emitting stray structure tokens.
enum Special : TokenId {
  kEos = 0,
  kBos = 1,
  kUnk = 2,
  kThinkOpen = 3,
  kThinkClose = 4,
  kStep = 5,
  kRefusal = 6,
  kNumSpecials = 7,
};

inline const std::vector<std::string>& special_surfaces() {
  static const std::vector<std::string> s = {
      "<eos>", "<bos>", "<unk>", "<think>", "</think>", "<step>", "<refuse>"};
  return s;
}

inline bool is_special(TokenId id) { return id >= 0 && id < kNumSpecials; }

namespace detail {

inline bool is_punct_char(char c) {
  static const std::string punct = ",.?!\"':;()";
  return punct.find(c) != std::string::npos;
}

}  // namespace detail

// Whitespace split followed by peeling leading/trailing punctuation into
// single-character tokens. Internal punctuation (apostrophes, hyphens)
// stays inside the word, so contractions like "can't" are one token.
// Special-token surfaces pass through whole.
inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string chunk(text.substr(i, j - i));
    i = j;
    const auto& specials = special_surfaces();
    if (std::find(specials.begin(), specials.end(), chunk) != specials.end()) {
      out.push_back(chunk);
      continue;
    }
    std::size_t b = 0, e = chunk.size();
    std::vector<std::string> tail;
    while (b < e && detail::is_punct_char(chunk[b])) out.emplace_back(1, chunk[b++]);
    while (e > b && detail::is_punct_char(chunk[e - 1])) tail.emplace_back(1, chunk[--e]);
    if (e > b) out.push_back(chunk.substr(b, e - b));
    out.insert(out.end(), tail.rbegin(), tail.rend());
  }
  return out;
}

// Fixed vocabulary: dense ids, specials first, then corpus words ordered
// digit-led < uppercase-led < lowercase-led < punctuation, lexicographic
// within each class. Digit-first ordering makes uniform-logit tie-breaks
// prefer year-like tokens over filler words, which keeps blocked-slot
// fallbacks on plausible rails.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary build(const std::vector<std::string>& texts) {
    std::set<std::string> words;
    const auto& specials = special_surfaces();
    for (const auto& t : texts) {
      for (auto& w : split_words(t)) {
        if (std::find(specials.begin(), specials.end(), w) == specials.end()) {
          words.insert(w);
        }
      }
    }
    Vocabulary v;
    v.tokens_ = specials;
    std::vector<std::string> sorted(words.begin(), words.end());
    std::sort(sorted.begin(), sorted.end(), [](const std::string& a, const std::string& b) {
      auto cat = [](const std::string& w) {
        unsigned char c = static_cast<unsigned char>(w[0]);
        if (std::isdigit(c)) return 0;
        if (std::isupper(c)) return 1;
        if (std::isalpha(c)) return 2;
        return 3;
      };
      int ca = cat(a), cb = cat(b);
      if (ca != cb) return ca < cb;
      return a < b;
    });
    v.tokens_.insert(v.tokens_.end(), sorted.begin(), sorted.end());
    v.reindex();
    return v;
  }

  std::size_t size() const { return tokens_.size(); }

  TokenId id_of(const std::string& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? kUnk : it->second;
  }

  const std::string& surface(TokenId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
      throw std::out_of_range("token id out of range");
    }
    return tokens_[static_cast<std::size_t>(id)];
  }

  TokenSeq tokenize(std::string_view text) const {
    TokenSeq ids;
    for (auto& w : split_words(text)) ids.push_back(id_of(w));
    return ids;
  }

  std::string detokenize(const TokenSeq& ids) const {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out += ' ';
      out += surface(ids[i]);
    }
    return out;
  }

  // Vocabulary file: one token per line, line number = id.
  void save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write vocabulary: " + path);
    for (const auto& t : tokens_) f << t << '\n';
  }

  static Vocabulary load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read vocabulary: " + path);
    Vocabulary v;
    std::string line;
    while (std::getline(f, line)) v.tokens_.push_back(line);
    if (v.tokens_.size() < kNumSpecials) {
      throw std::runtime_error("vocabulary file truncated: " + path);
    }
    v.reindex();
    return v;
  }

  bool operator==(const Vocabulary& o) const { return tokens_ == o.tokens_; }

 private:
  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      index_[tokens_[i]] = static_cast<TokenId>(i);
    }
  }

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
};

}  // namespace tguard
