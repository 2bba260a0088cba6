// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "tguard/embedding.hpp"
#include "tguard/types.hpp"
#include "tguard/vocab.hpp"

namespace tguard {

enum class PhraseOrigin { kExtracted, kEscalated };

struct ForbiddenPhrase {
  std::string surface;
  TokenSeq token_seq;
  std::vector<double> embedding;  // mean-pooled token vectors
  PhraseOrigin origin = PhraseOrigin::kExtracted;
};

struct Occurrence {
  std::size_t position;  // index of the first matched token in the stream
  std::size_t phrase;    // index into the lexicon's phrase list
  bool operator==(const Occurrence&) const = default;
  bool operator<(const Occurrence& o) const {
    return position != o.position ? position < o.position : phrase < o.phrase;
  }
};

// Aho-Corasick automaton over token-id sequences. Reports every overlapping
// occurrence; suppression needs all completions blocked, not one canonical
// parse.
class TokenAutomaton {
 public:
  TokenAutomaton() { nodes_.emplace_back(); }

  void add_pattern(const TokenSeq& pattern, std::size_t pattern_index) {
    int cur = 0;
    for (TokenId t : pattern) {
      auto it = nodes_[static_cast<std::size_t>(cur)].next.find(t);
      if (it == nodes_[static_cast<std::size_t>(cur)].next.end()) {
        nodes_.emplace_back();
        nodes_[static_cast<std::size_t>(cur)].next[t] = static_cast<int>(nodes_.size() - 1);
        cur = static_cast<int>(nodes_.size() - 1);
      } else {
        cur = it->second;
      }
    }
    nodes_[static_cast<std::size_t>(cur)].outputs.push_back(pattern_index);
    pattern_lengths_.resize(std::max(pattern_lengths_.size(), pattern_index + 1));
    pattern_lengths_[pattern_index] = pattern.size();
    last_tokens_.insert(pattern.back());
    built_ = false;
  }

  void build() {
    std::deque<int> queue;
    nodes_[0].fail = 0;
    for (auto& [tok, nxt] : nodes_[0].next) {
      nodes_[static_cast<std::size_t>(nxt)].fail = 0;
      queue.push_back(nxt);
    }
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (auto& [tok, v] : nodes_[static_cast<std::size_t>(u)].next) {
        int f = nodes_[static_cast<std::size_t>(u)].fail;
        while (f != 0 && !nodes_[static_cast<std::size_t>(f)].next.count(tok)) {
          f = nodes_[static_cast<std::size_t>(f)].fail;
        }
        auto it = nodes_[static_cast<std::size_t>(f)].next.find(tok);
        int link = (it != nodes_[static_cast<std::size_t>(f)].next.end() && it->second != v)
                       ? it->second
                       : 0;
        nodes_[static_cast<std::size_t>(v)].fail = link;
        const auto& fl = nodes_[static_cast<std::size_t>(link)];
        auto& outs = nodes_[static_cast<std::size_t>(v)].outputs;
        outs.insert(outs.end(), fl.outputs.begin(), fl.outputs.end());
        queue.push_back(v);
      }
    }
    built_ = true;
  }

  int step(int state, TokenId t) const {
    while (true) {
      auto it = nodes_[static_cast<std::size_t>(state)].next.find(t);
      if (it != nodes_[static_cast<std::size_t>(state)].next.end()) return it->second;
      if (state == 0) return 0;
      state = nodes_[static_cast<std::size_t>(state)].fail;
    }
  }

  const std::vector<std::size_t>& outputs(int state) const {
    return nodes_[static_cast<std::size_t>(state)].outputs;
  }

  // All overlapping occurrences, as (start position, pattern index).
  std::vector<Occurrence> find_occurrences(std::span<const TokenId> stream) const {
    std::vector<Occurrence> hits;
    int state = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
      state = step(state, stream[i]);
      for (std::size_t p : outputs(state)) {
        hits.push_back({i + 1 - pattern_lengths_[p], p});
      }
    }
    std::sort(hits.begin(), hits.end());
    return hits;
  }

  // Tokens v such that appending v to the suffix completes some pattern.
  // Only the trailing max-pattern-length window matters; candidate v are
  // restricted to pattern-final tokens.
  std::set<TokenId> completions(std::span<const TokenId> suffix) const {
    std::set<TokenId> blocked;
    std::size_t window = 0;
    for (std::size_t len : pattern_lengths_) window = std::max(window, len);
    std::size_t start = suffix.size() > window ? suffix.size() - window : 0;
    int state = 0;
    for (std::size_t i = start; i < suffix.size(); ++i) state = step(state, suffix[i]);
    for (TokenId v : last_tokens_) {
      if (!outputs(step(state, v)).empty()) blocked.insert(v);
    }
    return blocked;
  }

  bool empty() const { return nodes_.size() == 1; }
  bool built() const { return built_; }

 private:
  struct Node {
    std::map<TokenId, int> next;
    int fail = 0;
    std::vector<std::size_t> outputs;
  };
  std::vector<Node> nodes_;
  std::vector<std::size_t> pattern_lengths_;
  std::set<TokenId> last_tokens_;
  bool built_ = false;
};

// Compiled forbidden lexicon: phrases, their token-set union, and the span
// automaton used for hard blocking and leak scanning. Copy-on-extend;
// compiled lexicons are immutable in use.
class ForbiddenLexicon {
 public:
  ForbiddenLexicon() = default;

  static ForbiddenLexicon compile(std::vector<ForbiddenPhrase> phrases) {
    ForbiddenLexicon lex;
    for (auto& p : phrases) lex.append(std::move(p));
    lex.automaton_.build();
    return lex;
  }

  // New lexicon whose match set grows by the given phrase. Adding an
  // already-present phrase is a no-op.
  ForbiddenLexicon with_phrase(ForbiddenPhrase phrase) const {
    std::vector<ForbiddenPhrase> all = phrases_;
    for (const auto& p : all) {
      if (p.token_seq == phrase.token_seq) return *this;
    }
    all.push_back(std::move(phrase));
    return compile(std::move(all));
  }

  const std::vector<ForbiddenPhrase>& phrases() const { return phrases_; }
  const std::set<TokenId>& token_set() const { return token_set_; }
  bool empty() const { return phrases_.empty(); }

  std::set<TokenId> hard_block_set(std::span<const TokenId> suffix) const {
    if (phrases_.empty()) return {};
    return automaton_.completions(suffix);
  }

  std::vector<Occurrence> find_occurrences(std::span<const TokenId> stream) const {
    if (phrases_.empty()) return {};
    return automaton_.find_occurrences(stream);
  }

  // Lexicon file: phrase count header, then surface \t ids \t origin.
  void save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write lexicon: " + path);
    f << phrases_.size() << '\n';
    for (const auto& p : phrases_) {
      f << p.surface << '\t';
      for (std::size_t i = 0; i < p.token_seq.size(); ++i) {
        if (i) f << ' ';
        f << p.token_seq[i];
      }
      f << '\t' << (p.origin == PhraseOrigin::kExtracted ? "extracted" : "escalated") << '\n';
    }
  }

  static ForbiddenLexicon load(const std::string& path, const EmbeddingTable& table) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read lexicon: " + path);
    std::size_t n = 0;
    f >> n;
    std::string line;
    std::getline(f, line);
    std::vector<ForbiddenPhrase> phrases;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::getline(f, line)) throw std::runtime_error("lexicon truncated: " + path);
      auto t1 = line.find('\t');
      auto t2 = line.rfind('\t');
      if (t1 == std::string::npos || t2 == t1) {
        throw std::runtime_error("lexicon row malformed: " + path);
      }
      ForbiddenPhrase p;
      p.surface = line.substr(0, t1);
      std::istringstream ids(line.substr(t1 + 1, t2 - t1 - 1));
      TokenId id;
      while (ids >> id) p.token_seq.push_back(id);
      p.origin = line.substr(t2 + 1) == "escalated" ? PhraseOrigin::kEscalated
                                                    : PhraseOrigin::kExtracted;
      p.embedding = table.embed_tokens(p.token_seq);
      phrases.push_back(std::move(p));
    }
    return compile(std::move(phrases));
  }

 private:
  void append(ForbiddenPhrase p) {
    if (p.token_seq.empty()) throw ConfigError("phrase with empty tokenization rejected");
    automaton_.add_pattern(p.token_seq, phrases_.size());
    for (TokenId t : p.token_seq) token_set_.insert(t);
    phrases_.push_back(std::move(p));
  }

  std::vector<ForbiddenPhrase> phrases_;
  std::set<TokenId> token_set_;
  TokenAutomaton automaton_;
};

namespace detail {

inline bool title_cased(const std::string& w) {
  if (w.empty()) return false;
  unsigned char c0 = static_cast<unsigned char>(w[0]);
  if (!std::isalpha(c0) || !std::isupper(c0)) return false;
  for (std::size_t i = 1; i < w.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(w[i]);
    if (std::isalpha(c) && std::isupper(c)) return false;
  }
  return true;
}

inline bool year_like(const std::string& w) {
  return w.size() == 4 && std::all_of(w.begin(), w.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c));
         });
}

}  // namespace detail

// Rule-based phrase extraction over cot || answer text:
//   R1: maximal runs of title-cased words,
//   R2: 4-digit year tokens,
//   R3: spans between paired double-quote tokens.
// Rules apply in order; duplicates drop, first occurrence wins.
inline std::vector<std::string> extract_phrase_surfaces(const std::string& text) {
  auto words = split_words(text);
  std::vector<std::string> found;
  std::size_t i = 0;
  while (i < words.size()) {  // R1
    if (detail::title_cased(words[i])) {
      std::size_t j = i;
      std::string run;
      while (j < words.size() && detail::title_cased(words[j])) {
        if (!run.empty()) run += ' ';
        run += words[j];
        ++j;
      }
      found.push_back(run);
      i = j;
    } else {
      ++i;
    }
  }
  for (const auto& w : words) {  // R2
    if (detail::year_like(w)) found.push_back(w);
  }
  for (std::size_t a = 0; a < words.size(); ++a) {  // R3
    if (words[a] != "\"") continue;
    for (std::size_t b = a + 1; b < words.size(); ++b) {
      if (words[b] == "\"") {
        if (b > a + 1) {
          std::string span;
          for (std::size_t k = a + 1; k < b; ++k) {
            if (!span.empty()) span += ' ';
            span += words[k];
          }
          found.push_back(span);
        }
        a = b;
        break;
      }
    }
  }
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto& s : found) {
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<ForbiddenPhrase> extract_phrases(const Record& record,
                                                    const Vocabulary& vocab,
                                                    const EmbeddingTable& table) {
  std::vector<ForbiddenPhrase> out;
  for (auto& s : extract_phrase_surfaces(record.cot + " " + record.answer)) {
    ForbiddenPhrase p;
    p.surface = s;
    p.token_seq = vocab.tokenize(s);
    p.embedding = table.embed_tokens(p.token_seq);
    p.origin = PhraseOrigin::kExtracted;
    out.push_back(std::move(p));
  }
  return out;
}

inline ForbiddenPhrase make_phrase(const std::string& surface, const Vocabulary& vocab,
                                   const EmbeddingTable& table,
                                   PhraseOrigin origin = PhraseOrigin::kExtracted) {
  ForbiddenPhrase p;
  p.surface = surface;
  p.token_seq = vocab.tokenize(surface);
  p.embedding = table.embed_tokens(p.token_seq);
  p.origin = origin;
  return p;
}

}  // namespace tguard
