#pragma once

// Numerical gradient of the RNN loss, built only on forward().

#include <algorithm>
#include <cmath>
#include <vector>

#include "moodcast/rnn.hpp"

namespace oracle {

inline double rnn_loss(const moodcast::RnnModel& m, const moodcast::Matrix& inputs, double target) {
  const double e = moodcast::forward(m, inputs).prediction - target;
  return 0.5 * e * e;
}

/// Fourth-order central differences: truncation error O(h^4), so h can stay
/// large enough that cancellation is negligible.
inline std::vector<double> numeric_gradient(const moodcast::RnnModel& model, const moodcast::Matrix& inputs,
                                            double target, double h = 1e-3) {
  auto params = moodcast::flatten_parameters(model);
  std::vector<double> grad(params.size());
  moodcast::RnnModel probe = model;
  auto at = [&](std::size_t i, double offset) {
    auto p = params;
    p[i] += offset;
    moodcast::assign_parameters(probe, p);
    return rnn_loss(probe, inputs, target);
  };
  for (std::size_t i = 0; i < params.size(); ++i)
    grad[i] = (8.0 * (at(i, h) - at(i, -h)) - (at(i, 2 * h) - at(i, -2 * h))) / (12.0 * h);
  return grad;
}

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle
