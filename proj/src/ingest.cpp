#include "moodcast/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace moodcast {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.emplace_back(trim(cur));
  return fields;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

bool parse_two_digits(std::string_view s, int& out) {
  if (s.size() != 2 || s[0] < '0' || s[0] > '9' || s[1] < '0' || s[1] > '9') return false;
  out = (s[0] - '0') * 10 + (s[1] - '0');
  return true;
}

std::optional<double> parse_decimal(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

std::string Timestamp::iso() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d", seconds_of_day / 3600, seconds_of_day / 60 % 60,
                seconds_of_day % 60);
  return date.iso() + buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.size() < 10) return std::nullopt;
  auto date = parse_date(text.substr(0, 10));
  if (!date) return std::nullopt;
  Timestamp ts{*date, 0};
  std::string_view rest = text.substr(10);
  if (rest.empty()) return ts;
  if (rest.front() != 'T' && rest.front() != ' ') return std::nullopt;
  rest.remove_prefix(1);
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);

  int h = 0, m = 0, s = 0;
  if (rest.size() < 5 || rest[2] != ':' || !parse_two_digits(rest.substr(0, 2), h) ||
      !parse_two_digits(rest.substr(3, 2), m))
    return std::nullopt;
  rest.remove_prefix(5);
  if (!rest.empty()) {
    if (rest.size() < 3 || rest[0] != ':' || !parse_two_digits(rest.substr(1, 2), s)) return std::nullopt;
    rest.remove_prefix(3);
    if (!rest.empty()) {
      // fractional seconds are accepted and discarded
      if (rest.front() != '.' || rest.size() == 1) return std::nullopt;
      for (char c : rest.substr(1))
        if (c < '0' || c > '9') return std::nullopt;
    }
  }
  if (h > 23 || m > 59 || s > 60) return std::nullopt;
  ts.seconds_of_day = h * 3600 + m * 60 + std::min(s, 59);
  return ts;
}

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error([&] {
        std::ostringstream msg;
        msg << diagnostics.size() << " malformed row(s) in raw input";
        for (std::size_t i = 0; i < diagnostics.size() && i < 10; ++i)
          msg << "\n  line " << diagnostics[i].line << ": " << diagnostics[i].message;
        if (diagnostics.size() > 10) msg << "\n  ...";
        return msg.str();
      }()),
      diagnostics_(std::move(diagnostics)) {}

ParseResult parse_records(std::istream& in, ParseMode mode) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool index_column = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;

    auto fields = split_csv(view);
    if (!have_header) {
      if (fields.size() == 5 && fields[0].empty()) {
        index_column = true;
        fields.erase(fields.begin());
      }
      if (fields.size() != 4 || lower(fields[0]) != "id" || lower(fields[1]) != "time" ||
          lower(fields[2]) != "variable" || lower(fields[3]) != "value")
        throw ParseError({{line_no, "header must be id,time,variable,value"}});
      have_header = true;
      continue;
    }

    auto fail = [&](std::string msg) {
      result.diagnostics.push_back({line_no, std::move(msg)});
      ++result.skipped;
    };

    const std::size_t expected = index_column ? 5 : 4;
    if (fields.size() != expected) {
      fail("expected " + std::to_string(expected) + " columns, found " + std::to_string(fields.size()));
      continue;
    }
    if (index_column) fields.erase(fields.begin());

    ObservationRecord rec;
    rec.user_id = fields[0];
    rec.variable = fields[2];
    if (rec.user_id.empty()) {
      fail("empty id");
      continue;
    }
    if (rec.variable.empty()) {
      fail("empty variable name");
      continue;
    }
    auto ts = parse_timestamp(fields[1]);
    if (!ts) {
      fail("unparseable timestamp '" + fields[1] + "'");
      continue;
    }
    rec.time = *ts;
    if (!fields[3].empty() && fields[3] != "NA") {
      rec.value = parse_decimal(fields[3]);
      if (!rec.value) {
        fail("non-numeric value '" + fields[3] + "'");
        continue;
      }
    }
    result.records.push_back(std::move(rec));
  }

  if (!have_header) throw ParseError({{0, "missing header row"}});
  if (mode == ParseMode::strict && !result.diagnostics.empty()) throw ParseError(result.diagnostics);
  return result;
}

ParseResult parse_records(std::string_view text, ParseMode mode) {
  std::istringstream in{std::string(text)};
  return parse_records(in, mode);
}

void write_records_csv(std::ostream& out, std::span<const ObservationRecord> records) {
  out << "id,time,variable,value\n";
  for (const auto& r : records) {
    out << r.user_id << ',' << r.time.iso() << ',' << r.variable << ','
        << (r.value ? format_number(*r.value) : std::string("NA")) << '\n';
  }
}

std::optional<std::size_t> UserDayTable::variable_index(std::string_view name) const {
  auto it = std::find(variables.begin(), variables.end(), name);
  if (it == variables.end()) return std::nullopt;
  return static_cast<std::size_t>(it - variables.begin());
}

std::size_t UserDayTable::day_count() const {
  std::size_t n = 0;
  for (const auto& u : users) n += u.days.size();
  return n;
}

UserDayTable pivot_daily(std::span<const ObservationRecord> records) {
  std::set<std::string> names;
  for (const auto& r : records) names.insert(r.variable);

  UserDayTable table;
  table.variables.assign(names.begin(), names.end());
  std::map<std::string, std::size_t> var_index;
  for (std::size_t i = 0; i < table.variables.size(); ++i) var_index[table.variables[i]] = i;

  // user -> date -> variable -> raw values
  std::map<std::string, std::map<Date, std::map<std::size_t, std::vector<double>>>> buckets;
  for (const auto& r : records) {
    if (!r.value) continue;
    buckets[r.user_id][r.time.date][var_index.at(r.variable)].push_back(*r.value);
  }

  for (auto& [user, by_date] : buckets) {
    UserSeries series{user, {}};
    for (auto& [date, by_var] : by_date) {
      DayRow row{date, std::vector<std::optional<DailyCell>>(table.variables.size())};
      for (auto& [var, values] : by_var) {
        // Sorting fixes the summation order, so the mean does not depend on
        // record order; shifting by the minimum keeps equal values exact.
        std::sort(values.begin(), values.end());
        const double lo = values.front();
        double shifted = 0.0;
        for (double v : values) shifted += v - lo;
        const double mean = std::clamp(lo + shifted / static_cast<double>(values.size()), lo, values.back());
        row.cells[var] = DailyCell{mean, static_cast<int>(values.size())};
      }
      series.days.push_back(std::move(row));
    }
    table.users.push_back(std::move(series));
  }
  return table;
}

}  // namespace moodcast
