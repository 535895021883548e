#include "moodcast/features.hpp"

#include <cmath>
#include <ostream>

namespace moodcast {

std::vector<double> rolling_mean(std::span<const double> series, std::size_t window) {
  if (window == 0) throw Error("rolling_mean: window must be positive");
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t first = i + 1 >= window ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = first; j <= i; ++j) sum += series[j];
    out[i] = sum / static_cast<double>(i - first + 1);
  }
  return out;
}

ClassificationSet build_classification_examples(const UserDayTable& table, std::size_t window) {
  const auto mood = table.variable_index(kMoodVariable);
  if (!mood) throw Error("features: mood variable not retained");

  ClassificationSet set;
  set.feature_names = table.variables;
  set.feature_names.push_back("mood_mean_" + std::to_string(window) + "d");

  for (const auto& user : table.users) {
    if (user.days.size() < 2) {
      set.warnings.push_back("user " + user.user_id + " has fewer than 2 retained days; no classification examples");
      continue;
    }
    std::vector<double> moods;
    moods.reserve(user.days.size());
    for (const auto& day : user.days) {
      if (!day.cells[*mood]) throw Error("features: table is not complete (missing mood for " + user.user_id + ")");
      moods.push_back(day.cells[*mood]->mean);
    }
    const auto trailing = rolling_mean(moods, window);

    for (std::size_t t = 0; t + 1 < user.days.size(); ++t) {
      ClassificationExample ex;
      ex.user_id = user.user_id;
      ex.target_date = user.days[t + 1].date;
      ex.features.reserve(set.feature_names.size());
      for (std::size_t v = 0; v < table.variables.size(); ++v) {
        const auto& cell = user.days[t].cells[v];
        if (!cell) throw Error("features: table is not complete (" + user.user_id + ", " + table.variables[v] + ")");
        ex.features.push_back(cell->mean);
      }
      ex.features.push_back(trailing[t]);
      const long cls = round_half_up(moods[t + 1]);
      if (cls < 1 || cls > 10)
        throw Error("features: mood " + format_number(moods[t + 1]) + " of " + user.user_id +
                    " is outside the 1..10 class range");
      ex.target_class = static_cast<int>(cls);
      set.examples.push_back(std::move(ex));
    }
  }
  return set;
}

void write_examples_csv(std::ostream& out, const ClassificationSet& set) {
  out << "id,target_date";
  for (const auto& name : set.feature_names) out << ',' << name;
  out << ",target_class\n";
  for (const auto& ex : set.examples) {
    out << ex.user_id << ',' << ex.target_date.iso();
    for (double f : ex.features) out << ',' << format_number(f);
    out << ',' << ex.target_class << '\n';
  }
}

SequenceSet build_sequence_examples(const UserDayTable& table, const ScalingParams& params, std::size_t seq_len) {
  if (seq_len == 0) throw Error("features: seq_len must be positive");
  const auto mood = table.variable_index(kMoodVariable);
  if (!mood) throw Error("features: mood variable not retained");

  std::vector<Range> ranges;
  for (const auto& v : table.variables) ranges.push_back(params.at(v));
  const std::size_t n_vars = table.variables.size();

  SequenceSet set;
  for (const auto& user : table.users) {
    UserSequences seqs{user.user_id, {}};
    const std::size_t n_days = user.days.size();
    if (n_days <= seq_len) {
      set.warnings.push_back("user " + user.user_id + " has " + std::to_string(n_days) +
                             " retained days, not more than seq_len " + std::to_string(seq_len) +
                             "; no sequence examples");
      set.users.push_back(std::move(seqs));
      continue;
    }

    // scale the whole series once; windows are views into it
    Matrix scaled(n_days, n_vars);
    for (std::size_t d = 0; d < n_days; ++d)
      for (std::size_t v = 0; v < n_vars; ++v) {
        const auto& cell = user.days[d].cells[v];
        if (!cell) throw Error("features: table is not complete (" + user.user_id + ", " + table.variables[v] + ")");
        if (!ranges[v].contains(cell->mean)) ++set.clamped;
        scaled(d, v) = apply_scaling(cell->mean, ranges[v]);
      }

    for (std::size_t start = 0; start + seq_len < n_days; ++start) {
      SequenceExample ex;
      ex.user_id = user.user_id;
      ex.target_date = user.days[start + seq_len].date;
      ex.target = scaled(start + seq_len, *mood);
      ex.inputs = Matrix(seq_len, n_vars);
      for (std::size_t t = 0; t < seq_len; ++t)
        std::copy_n(scaled.row(start + t).begin(), n_vars, ex.inputs.row(t).begin());
      for (std::size_t t = start; t < start + seq_len; ++t)
        if (user.days[t + 1].date.serial() - user.days[t].date.serial() != 1) ex.has_gap = true;
      seqs.examples.push_back(std::move(ex));
    }
    set.users.push_back(std::move(seqs));
  }
  return set;
}

void SplitSpec::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error("split: test_fraction must lie in (0,1)");
}

std::size_t holdout_size(std::size_t n, double fraction) {
  // the epsilon absorbs representation error, e.g. 5 * 0.3 == 1.4999999999999998
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 0.5 + 1e-9));
}

}  // namespace moodcast
