#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moodcast/common.hpp"

namespace moodcast {

struct Timestamp {
  Date date;
  int seconds_of_day = 0;

  auto operator<=>(const Timestamp&) const = default;
  std::string iso() const;
};

/// ISO 8601 date with optional time of day (`T` or space separator,
/// `HH:MM`, `HH:MM:SS` or `HH:MM:SS.fff`; a trailing `Z` is accepted).
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// One raw log line in long format.
struct ObservationRecord {
  std::string user_id;
  Timestamp time;
  std::string variable;
  std::optional<double> value;  ///< absent when the source marks it NA

  bool operator==(const ObservationRecord&) const = default;
};

struct Diagnostic {
  std::size_t line = 0;
  std::string message;
};

enum class ParseMode { strict, lenient };

struct ParseResult {
  std::vector<ObservationRecord> records;
  std::vector<Diagnostic> diagnostics;
  std::size_t skipped = 0;
};

/// Raised in strict mode; carries every diagnostic found, not just the first.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Reads the raw CSV (`id,time,variable,value` header, optional leading
/// unnamed index column). Empty fields and `NA` are absent values.
ParseResult parse_records(std::istream& in, ParseMode mode = ParseMode::strict);
ParseResult parse_records(std::string_view text, ParseMode mode = ParseMode::strict);

void write_records_csv(std::ostream& out, std::span<const ObservationRecord> records);

struct DailyCell {
  double mean = 0.0;
  int count = 0;  ///< 0 marks a cell imputed by forward_fill

  bool imputed() const { return count == 0; }
  bool operator==(const DailyCell&) const = default;
};

struct DayRow {
  Date date;
  std::vector<std::optional<DailyCell>> cells;  ///< indexed like UserDayTable::variables

  bool operator==(const DayRow&) const = default;
};

struct UserSeries {
  std::string user_id;
  std::vector<DayRow> days;  ///< strictly increasing dates

  bool operator==(const UserSeries&) const = default;
};

/// Per user, per calendar day, per variable daily means.
struct UserDayTable {
  std::vector<std::string> variables;  ///< sorted registry
  std::vector<UserSeries> users;       ///< sorted by user id

  std::optional<std::size_t> variable_index(std::string_view name) const;
  std::size_t day_count() const;
  bool operator==(const UserDayTable&) const = default;
};

UserDayTable pivot_daily(std::span<const ObservationRecord> records);

}  // namespace moodcast
