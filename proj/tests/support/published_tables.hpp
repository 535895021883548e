#pragma once

// Confusion matrices as printed in the original study.

#include "moodcast/eval.hpp"

namespace tables {

/// SVM results on the training sample: actual 5..8 by predicted 3..9.
inline moodcast::ConfusionMatrix training_sample() {
  return moodcast::ConfusionMatrix({5, 6, 7, 8}, {3, 4, 5, 6, 7, 8, 9},
                                   {{0, 1, 4, 1, 0, 0, 0},
                                    {1, 2, 9, 71, 11, 4, 0},
                                    {0, 0, 0, 23, 313, 31, 2},
                                    {0, 0, 0, 0, 13, 79, 0}});
}

/// SVM results on the 100-sample test set: actual 6..8 by predicted {3,5,6,7,8}.
inline moodcast::ConfusionMatrix test_sample() {
  return moodcast::ConfusionMatrix({6, 7, 8}, {3, 5, 6, 7, 8},
                                   {{1, 2, 10, 2, 0},
                                    {0, 1, 5, 55, 3},
                                    {0, 0, 0, 5, 16}});
}

/// Two-class matrix with `correct` of `total` on the diagonal.
inline moodcast::ConfusionMatrix with_accuracy(long correct, long total) {
  return moodcast::ConfusionMatrix({6, 7}, {6, 7}, {{correct, total - correct}, {0, 0}});
}

}  // namespace tables
