#include "moodcast/baseline.hpp"

namespace moodcast {

std::vector<MoodPoint> mood_series(const UserSeries& user, std::size_t mood_index) {
  std::vector<MoodPoint> out;
  out.reserve(user.days.size());
  for (const auto& day : user.days)
    if (day.cells.at(mood_index)) out.push_back({day.date, day.cells[mood_index]->mean});
  return out;
}

std::vector<NaivePrediction> predict_naive(std::string_view user_id, std::span<const MoodPoint> series) {
  std::vector<NaivePrediction> out;
  for (std::size_t t = 1; t < series.size(); ++t) {
    if (!(series[t - 1].date < series[t].date)) throw Error("baseline: mood series for " + std::string(user_id) + " is not date-ordered");
    out.push_back({std::string(user_id), series[t].date, series[t - 1].mood, series[t].mood});
  }
  return out;
}

double naive_class_accuracy(std::span<const std::vector<MoodPoint>> series) {
  std::size_t hits = 0, total = 0;
  for (const auto& s : series)
    for (std::size_t t = 1; t < s.size(); ++t) {
      ++total;
      if (round_half_up(s[t - 1].mood) == round_half_up(s[t].mood)) ++hits;
    }
  if (total == 0) throw Error("baseline: no persistence predictions (every series has fewer than 2 days)");
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace moodcast
