#include "moodcast/preprocess.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

namespace moodcast {

void PruneConfig::validate() const {
  if (!(min_variable_coverage >= 0.0 && min_variable_coverage <= 1.0))
    throw Error("prune: min_variable_coverage must lie in [0,1]");
  if (!(min_day_coverage >= 0.0 && min_day_coverage <= 1.0))
    throw Error("prune: min_day_coverage must lie in [0,1]");
}

std::vector<double> variable_coverage(const UserDayTable& table) {
  std::vector<std::size_t> present(table.variables.size(), 0);
  std::size_t days = 0;
  for (const auto& user : table.users) {
    days += user.days.size();
    for (const auto& day : user.days)
      for (std::size_t v = 0; v < day.cells.size(); ++v)
        if (day.cells[v]) ++present[v];
  }
  std::vector<double> coverage(table.variables.size(), 0.0);
  if (days == 0) return coverage;
  for (std::size_t v = 0; v < coverage.size(); ++v)
    coverage[v] = static_cast<double>(present[v]) / static_cast<double>(days);
  return coverage;
}

UserDayTable prune_variables(const UserDayTable& table, const PruneConfig& config) {
  config.validate();
  const auto mood = table.variable_index(kMoodVariable);
  const auto coverage = variable_coverage(table);
  if (!mood || coverage[*mood] == 0.0) throw Error("prune: mood variable has no observations; nothing to predict");

  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < table.variables.size(); ++v)
    if (v == *mood || coverage[v] >= config.min_variable_coverage) keep.push_back(v);

  UserDayTable out;
  for (auto v : keep) out.variables.push_back(table.variables[v]);
  for (const auto& user : table.users) {
    UserSeries series{user.user_id, {}};
    series.days.reserve(user.days.size());
    for (const auto& day : user.days) {
      DayRow row{day.date, {}};
      row.cells.reserve(keep.size());
      for (auto v : keep) row.cells.push_back(day.cells[v]);
      series.days.push_back(std::move(row));
    }
    out.users.push_back(std::move(series));
  }
  return out;
}

DayPruneResult prune_days(const UserDayTable& table, const PruneConfig& config) {
  config.validate();
  const auto mood = table.variable_index(kMoodVariable);
  if (config.require_mood && !mood) throw Error("prune: mood variable missing from registry");

  DayPruneResult result;
  result.table.variables = table.variables;
  const double n_vars = static_cast<double>(table.variables.size());
  for (const auto& user : table.users) {
    UserSeries series{user.user_id, {}};
    for (const auto& day : user.days) {
      if (config.require_mood && !day.cells[*mood]) continue;
      const auto present = std::count_if(day.cells.begin(), day.cells.end(), [](const auto& c) { return c.has_value(); });
      const double fraction = n_vars > 0 ? static_cast<double>(present) / n_vars : 1.0;
      if (fraction < config.min_day_coverage) continue;
      series.days.push_back(day);
    }
    if (series.days.empty())
      result.dropped_users.push_back(user.user_id);
    else
      result.table.users.push_back(std::move(series));
  }
  return result;
}

UserDayTable forward_fill(const UserDayTable& table) {
  UserDayTable out = table;
  for (auto& user : out.users) {
    for (std::size_t v = 0; v < out.variables.size(); ++v) {
      std::optional<double> last;
      for (const auto& day : user.days) {
        if (day.cells[v]) {
          last = day.cells[v]->mean;
          break;
        }
      }
      if (!last)
        throw Error("forward_fill: variable '" + out.variables[v] + "' has no observations for user " +
                    user.user_id + "; it should have been pruned");
      for (auto& day : user.days) {
        if (day.cells[v])
          last = day.cells[v]->mean;
        else
          day.cells[v] = DailyCell{*last, 0};
      }
    }
  }
  return out;
}

const Range& ScalingParams::at(std::string_view variable) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == variable) return ranges[i];
  throw Error("scaling: no parameters for variable '" + std::string(variable) + "'");
}

ScalingParams fit_scaling(const UserDayTable& table, std::span<const std::string> variables) {
  ScalingParams params;
  for (const auto& name : variables) {
    const auto v = table.variable_index(name);
    if (!v) throw Error("scaling: unknown variable '" + name + "'");
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& user : table.users)
      for (const auto& day : user.days)
        if (day.cells[*v]) {
          r.min = std::min(r.min, day.cells[*v]->mean);
          r.max = std::max(r.max, day.cells[*v]->mean);
        }
    if (r.min > r.max) throw Error("scaling: variable '" + name + "' has no values");
    params.variables.push_back(name);
    params.ranges.push_back(r);
  }
  return params;
}

double apply_scaling(double x, const Range& range) {
  if (range.degenerate()) return 0.5;
  return std::clamp((x - range.min) / (range.max - range.min), 0.0, 1.0);
}

double inverse_scaling(double y, const Range& range) {
  if (range.degenerate()) return range.min;
  return range.min + y * (range.max - range.min);
}

void write_wide_csv(std::ostream& out, const UserDayTable& table) {
  out << "id,date";
  for (const auto& v : table.variables) out << ',' << v;
  out << '\n';
  for (const auto& user : table.users)
    for (const auto& day : user.days) {
      out << user.user_id << ',' << day.date.iso();
      for (const auto& cell : day.cells) out << ',' << (cell ? format_number(cell->mean) : std::string("NA"));
      out << '\n';
    }
}

void write_imputation_flags_csv(std::ostream& out, const UserDayTable& table) {
  out << "id,date";
  for (const auto& v : table.variables) out << ',' << v;
  out << '\n';
  for (const auto& user : table.users)
    for (const auto& day : user.days) {
      out << user.user_id << ',' << day.date.iso();
      for (const auto& cell : day.cells) out << ',' << (cell && !cell->imputed() ? '0' : '1');
      out << '\n';
    }
}

}  // namespace moodcast
