// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "tguard/corpus.hpp"
#include "tguard/embedding.hpp"
#include "tguard/logistic.hpp"

namespace tguard {

struct ScopeTrainOptions {
  int steps = 20000;
  double lr = 20.0;
  double l2 = 1e-4;
};

// Logistic scope gate over pooled question embeddings: p_f estimates the
// probability a query targets forget-set content. Inputs are unit-normalized
// before scoring so long texts and short queries live on the same scale.
class ScopeClassifier {
 public:
  ScopeClassifier() = default;

  static ScopeClassifier train(const std::vector<Record>& forget,
                               const std::vector<Record>& retain,
                               const EmbeddingTable& table, const Vocabulary& vocab,
                               const ScopeTrainOptions& opt = {},
                               std::string trained_on_hash = {}) {
    if (forget.empty() || retain.empty()) {
      throw ConfigError("scope classifier needs both a forget and a retain class");
    }
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (const auto& r : forget) {
      X.push_back(unit(table.embed_text(vocab, r.question)));
      y.push_back(1.0);
    }
    for (const auto& r : retain) {
      X.push_back(unit(table.embed_text(vocab, r.question)));
      y.push_back(0.0);
    }
    ScopeClassifier clf;
    clf.model_ = fit_logistic(X, y, opt.steps, opt.lr, opt.l2);
    clf.trained_on_ = std::move(trained_on_hash);
    return clf;
  }

  double classify_text(const EmbeddingTable& table, const Vocabulary& vocab,
                       std::string_view text) const {
    return model_.predict(unit(table.embed_text(vocab, text)));
  }

  double classify_tokens(const EmbeddingTable& table, std::span<const TokenId> ids) const {
    return model_.predict(unit(table.embed_tokens(ids)));
  }

  const LogisticModel& model() const { return model_; }
  const std::string& trained_on() const { return trained_on_; }

  // Flat weight file: hash line, dim line, one weight per line, bias last.
  void save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write classifier: " + path);
    f.precision(17);
    f << trained_on_ << '\n' << model_.weights.size() << '\n';
    for (double w : model_.weights) f << w << '\n';
    f << model_.bias << '\n';
  }

  static ScopeClassifier load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read classifier: " + path);
    ScopeClassifier clf;
    std::getline(f, clf.trained_on_);
    std::size_t d = 0;
    f >> d;
    clf.model_.weights.resize(d);
    for (auto& w : clf.model_.weights) f >> w;
    f >> clf.model_.bias;
    if (!f) throw std::runtime_error("classifier file malformed: " + path);
    return clf;
  }

 private:
  static std::vector<double> unit(std::vector<double> v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n > 1e-12) {
      for (auto& x : v) x /= n;
    }
    return v;
  }

  LogisticModel model_;
  std::string trained_on_;
};

// Argmax of cosine similarity between the query embedding and each forget
// record's question-plus-answer embedding; ties break toward the lowest
// record id. Linear scan; exact by construction.
inline std::size_t retrieve_most_similar(const std::string& query,
                                         const std::vector<Record>& forget,
                                         const EmbeddingTable& table,
                                         const Vocabulary& vocab) {
  if (forget.empty()) throw std::invalid_argument("retrieval over an empty forget set");
  auto qe = table.embed_text(vocab, query);
  std::size_t best = 0;
  double best_sim = -2.0;
  for (std::size_t i = 0; i < forget.size(); ++i) {
    auto ke = table.embed_text(vocab, forget[i].question + " " + forget[i].answer);
    double s = cosine_similarity(qe, ke);
    bool better = s > best_sim ||
                  (s == best_sim && forget[i].id < forget[best].id);
    if (i == 0 || better) {
      best = i;
      best_sim = s;
    }
  }
  return best;
}

}  // namespace tguard
