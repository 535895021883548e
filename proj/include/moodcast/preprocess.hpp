#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moodcast/ingest.hpp"

namespace moodcast {

/// Name of the target variable in the raw logs.
inline constexpr std::string_view kMoodVariable = "mood";

struct PruneConfig {
  double min_variable_coverage = 0.6;  ///< share of days a variable must be present on
  double min_day_coverage = 0.8;       ///< share of retained variables a day must carry
  bool require_mood = true;

  void validate() const;
};

/// Pooled presence fraction per registry variable: days where the variable
/// is present over all users' days.
std::vector<double> variable_coverage(const UserDayTable& table);

/// Removes sparse variables globally. Mood is never removed; a table without
/// any mood observation is rejected.
UserDayTable prune_variables(const UserDayTable& table, const PruneConfig& config);

struct DayPruneResult {
  UserDayTable table;
  std::vector<std::string> dropped_users;  ///< users left without any day
};

/// Per user: drops days without mood (when required) and days whose share of
/// present variables falls below the threshold.
DayPruneResult prune_days(const UserDayTable& table, const PruneConfig& config);

/// Fills missing cells with the previous day's mean, or the first observed
/// mean for leading gaps. Filled cells get count 0.
UserDayTable forward_fill(const UserDayTable& table);

struct Range {
  double min = 0.0;
  double max = 0.0;

  bool degenerate() const { return !(max > min); }
  bool contains(double x) const { return x >= min && x <= max; }
  bool operator==(const Range&) const = default;
};

struct ScalingParams {
  std::vector<std::string> variables;
  std::vector<Range> ranges;

  const Range& at(std::string_view variable) const;
  bool operator==(const ScalingParams&) const = default;
};

ScalingParams fit_scaling(const UserDayTable& table, std::span<const std::string> variables);

/// Min-max map onto [0,1]; out-of-range input is clamped. A degenerate range
/// maps everything to 0.5.
double apply_scaling(double x, const Range& range);
double inverse_scaling(double y, const Range& range);

/// Wide export: one row per (user, date), one column per variable; NA when missing.
void write_wide_csv(std::ostream& out, const UserDayTable& table);
/// Companion to write_wide_csv: 1 where the value was imputed, 0 where measured.
void write_imputation_flags_csv(std::ostream& out, const UserDayTable& table);

}  // namespace moodcast
