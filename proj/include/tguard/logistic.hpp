// Copyright 2026 The TrajectoryGuard Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace tguard {

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;

  double score(std::span<const double> x) const {
    double z = bias;
    std::size_t n = std::min(x.size(), weights.size());
    for (std::size_t i = 0; i < n; ++i) z += weights[i] * x[i];
    return z;
  }

  double predict(std::span<const double> x) const { return sigmoid(score(x)); }
};

// Full-batch gradient descent from zero weights; deterministic for fixed
// inputs. L2 penalty applies to the weights only.
inline LogisticModel fit_logistic(const std::vector<std::vector<double>>& X,
                                  const std::vector<double>& y, int steps,
                                  double lr, double l2 = 0.0) {
  if (X.empty() || X.size() != y.size()) {
    throw std::invalid_argument("logistic fit: bad training data");
  }
  const std::size_t n = X.size(), d = X[0].size();
  LogisticModel m;
  m.weights.assign(d, 0.0);
  std::vector<double> grad(d);
  for (int step = 0; step < steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double g = sigmoid(m.score(X[i])) - y[i];
      for (std::size_t j = 0; j < d; ++j) grad[j] += g * X[i][j];
      gb += g;
    }
    for (std::size_t j = 0; j < d; ++j) {
      m.weights[j] -= lr * (grad[j] / static_cast<double>(n) + l2 * m.weights[j]);
    }
    m.bias -= lr * gb / static_cast<double>(n);
  }
  return m;
}

}  // namespace tguard
