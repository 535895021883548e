#pragma once

// Random inputs for property tests.

#include <algorithm>
#include <string>
#include <vector>

#include "moodcast/ingest.hpp"
#include "moodcast/random.hpp"

namespace testgen {

/// Table with 1-4 users, 1-12 days each (random calendar gaps), 1-5
/// variables, "mood" always in the registry, and each cell missing with
/// probability `missing`. Every variable is observed at least once per user
/// when `observed_per_user` is set.
inline moodcast::UserDayTable random_table(moodcast::Rng& rng, double missing, bool observed_per_user) {
  moodcast::UserDayTable t;
  const std::size_t n_vars = 1 + rng.index(5);
  t.variables.push_back("mood");
  for (std::size_t v = 1; v < n_vars; ++v) t.variables.push_back("v" + std::to_string(v));
  std::sort(t.variables.begin(), t.variables.end());

  const std::size_t n_users = 1 + rng.index(4);
  for (std::size_t u = 0; u < n_users; ++u) {
    moodcast::UserSeries s{"U" + std::to_string(u), {}};
    const std::size_t n_days = 1 + rng.index(12);
    std::int64_t day = moodcast::Date{2014, 3, 1}.serial() + static_cast<std::int64_t>(rng.index(5));
    for (std::size_t d = 0; d < n_days; ++d) {
      moodcast::DayRow row{moodcast::Date::from_serial(day), {}};
      for (std::size_t v = 0; v < n_vars; ++v) {
        if (rng.uniform01() < missing) {
          row.cells.emplace_back();
        } else {
          row.cells.push_back(moodcast::DailyCell{rng.uniform(-5.0, 15.0), 1 + static_cast<int>(rng.index(4))});
        }
      }
      s.days.push_back(std::move(row));
      day += 1 + static_cast<std::int64_t>(rng.index(3));
    }
    if (observed_per_user) {
      for (std::size_t v = 0; v < n_vars; ++v) {
        bool any = false;
        for (const auto& r : s.days) any = any || r.cells[v].has_value();
        if (!any) s.days[rng.index(s.days.size())].cells[v] = moodcast::DailyCell{rng.uniform(1.0, 10.0), 1};
      }
    }
    t.users.push_back(std::move(s));
  }
  return t;
}

inline std::vector<double> random_series(moodcast::Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> out(n);
  for (auto& x : out) x = rng.uniform(lo, hi);
  return out;
}

}  // namespace testgen
