#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moodcast/common.hpp"
#include "moodcast/ingest.hpp"

namespace moodcast {

struct MoodPoint {
  Date date;
  double mood = 0.0;
};

/// Persistence forecast: tomorrow's mood equals today's.
struct NaivePrediction {
  std::string user_id;
  Date target_date;
  double predicted = 0.0;
  double actual = 0.0;
};

/// Daily mood means of one user, in date order. Days without mood are skipped.
std::vector<MoodPoint> mood_series(const UserSeries& user, std::size_t mood_index);

/// n-1 predictions for n days; empty when fewer than two days.
std::vector<NaivePrediction> predict_naive(std::string_view user_id, std::span<const MoodPoint> series);

/// Share of persistence predictions whose rounded class matches the actual's,
/// pooled over all series.
double naive_class_accuracy(std::span<const std::vector<MoodPoint>> series);

}  // namespace moodcast
