#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "moodcast/common.hpp"
#include "moodcast/preprocess.hpp"
#include "moodcast/random.hpp"

namespace moodcast {

/// Trailing mean with a shrinking window at the head of the series.
std::vector<double> rolling_mean(std::span<const double> series, std::size_t window);

/// Daily means of day t plus the trailing mood mean; target is the next
/// retained day's mood, rounded half-up.
struct ClassificationExample {
  std::vector<double> features;
  int target_class = 0;
  std::string user_id;
  Date target_date;
};

struct ClassificationSet {
  std::vector<ClassificationExample> examples;
  std::vector<std::string> feature_names;
  std::vector<std::string> warnings;
};

ClassificationSet build_classification_examples(const UserDayTable& table, std::size_t window = 5);

void write_examples_csv(std::ostream& out, const ClassificationSet& set);

/// A window of consecutive retained days, scaled to [0,1], and the scaled mood
/// of the day after it.
struct SequenceExample {
  Matrix inputs;  ///< seq_len x variables
  double target = 0.0;
  std::string user_id;
  Date target_date;
  bool has_gap = false;  ///< retained days in the window skip calendar days
};

struct UserSequences {
  std::string user_id;
  std::vector<SequenceExample> examples;
};

struct SequenceSet {
  std::vector<UserSequences> users;  ///< every table user, possibly with no examples
  std::vector<std::string> warnings;
  std::size_t clamped = 0;  ///< scaled values that fell outside the fitted range
};

SequenceSet build_sequence_examples(const UserDayTable& table, const ScalingParams& params, std::size_t seq_len = 5);

enum class SplitMode { global_random, per_user_chronological };

struct SplitSpec {
  double test_fraction = 0.1;
  SplitMode mode = SplitMode::global_random;
  std::uint64_t seed = 0;

  void validate() const;
};

/// round-half-up(n * fraction).
std::size_t holdout_size(std::size_t n, double fraction);

template <class Example>
struct Split {
  std::vector<Example> train;
  std::vector<Example> test;
};

/// Partitions examples into train and test. Both sides keep input order.
template <class Example>
Split<Example> split_holdout(std::span<const Example> examples, const SplitSpec& spec) {
  spec.validate();
  if (examples.empty()) throw Error("split: no examples to split");
  std::vector<bool> in_test(examples.size(), false);

  if (spec.mode == SplitMode::global_random) {
    const std::size_t k = holdout_size(examples.size(), spec.test_fraction);
    if (k == 0 || k == examples.size())
      throw Error("split: global pool of " + std::to_string(examples.size()) + " examples leaves an empty " +
                  (k == 0 ? "test" : "train") + " side");
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(spec.seed);
    shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t i = 0; i < k; ++i) in_test[order[i]] = true;
  } else {
    std::map<std::string, std::vector<std::size_t>> by_user;
    for (std::size_t i = 0; i < examples.size(); ++i) by_user[examples[i].user_id].push_back(i);
    for (auto& [user, idx] : by_user) {
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return examples[a].target_date < examples[b].target_date; });
      const std::size_t k = holdout_size(idx.size(), spec.test_fraction);
      if (k == 0 || k == idx.size())
        throw Error("split: user " + user + " with " + std::to_string(idx.size()) + " examples leaves an empty " +
                    (k == 0 ? "test" : "train") + " side");
      for (std::size_t i = idx.size() - k; i < idx.size(); ++i) in_test[idx[i]] = true;
    }
  }

  Split<Example> out;
  for (std::size_t i = 0; i < examples.size(); ++i) (in_test[i] ? out.test : out.train).push_back(examples[i]);
  return out;
}

}  // namespace moodcast
