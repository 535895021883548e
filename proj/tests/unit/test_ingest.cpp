#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "moodcast/ingest.hpp"
#include "moodcast/random.hpp"

using namespace moodcast;

namespace {

const char* kHeader = "id,time,variable,value\n";

ObservationRecord rec(std::string user, std::string ts, std::string var, std::optional<double> v) {
  return {std::move(user), *parse_timestamp(ts), std::move(var), v};
}

}  // namespace

TEST_CASE("a well-formed row maps field by field") {
  auto r = parse_records(std::string(kHeader) + "AS14.01,2014-02-26T13:00:00,mood,6\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].user_id == "AS14.01");
  CHECK(r.records[0].time.date == Date{2014, 2, 26});
  CHECK(r.records[0].time.seconds_of_day == 13 * 3600);
  CHECK(r.records[0].variable == "mood");
  CHECK(r.records[0].value == 6.0);
}

TEST_CASE("NA and empty values are absent") {
  auto r = parse_records(std::string(kHeader) +
                         "AS14.01,2014-02-26T14:00:00,screen,NA\n"
                         "AS14.01,2014-02-26T15:00:00,screen,\n");
  REQUIRE(r.records.size() == 2);
  CHECK_FALSE(r.records[0].value.has_value());
  CHECK_FALSE(r.records[1].value.has_value());
}

TEST_CASE("strict mode fails with every diagnostic") {
  const std::string text = std::string(kHeader) +
                           "AS14.01,notadate,mood,6\n"
                           "AS14.01,2014-02-26T13:00:00,mood,6\n"
                           "AS14.01,2014-02-26T13:00:00,mood,six\n"
                           "AS14.01,2014-02-26T13:00:00,mood\n";
  try {
    parse_records(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.diagnostics().size() == 3);
    CHECK(e.diagnostics()[0].line == 2);
    CHECK(e.diagnostics()[1].line == 4);
    CHECK(e.diagnostics()[2].line == 5);
  }
  auto lenient = parse_records(text, ParseMode::lenient);
  CHECK(lenient.records.size() == 1);
  CHECK(lenient.skipped == 3);
}

TEST_CASE("header variants") {
  auto indexed = parse_records(",id,time,variable,value\n1,AS14.01,2014-02-26 13:00:00.000,mood,6\n");
  REQUIRE(indexed.records.size() == 1);
  CHECK(indexed.records[0].value == 6.0);
  CHECK_THROWS_AS(parse_records("user,when,what,value\n"), ParseError);
  CHECK_THROWS_AS(parse_records(""), ParseError);
  auto bom = parse_records("\xEF\xBB\xBFid,time,variable,value\r\nA,2014-01-01,mood,\"7\"\r\n");
  CHECK(bom.records.at(0).value == 7.0);
}

TEST_CASE("timestamps") {
  CHECK(parse_timestamp("2014-02-26")->seconds_of_day == 0);
  CHECK(parse_timestamp("2014-02-26T13:05")->seconds_of_day == 13 * 3600 + 300);
  CHECK(parse_timestamp("2014-02-26 13:05:09.123Z")->seconds_of_day == 13 * 3600 + 309);
  CHECK_FALSE(parse_timestamp("2014-02-26X13:05").has_value());
  CHECK_FALSE(parse_timestamp("2014-02-26T25:00").has_value());
  CHECK(parse_timestamp("2014-02-26T13:05:09")->iso() == "2014-02-26T13:05:09");
}

TEST_CASE("written records parse back identically") {
  std::vector<ObservationRecord> records{rec("A", "2014-02-26T13:00:00", "mood", 6.25),
                                         rec("A", "2014-02-26T14:00:00", "screen", std::nullopt),
                                         rec("B", "2014-02-27T08:30:00", "activity", 0.1)};
  std::ostringstream out;
  write_records_csv(out, records);
  CHECK(parse_records(out.str()).records == records);
}

TEST_CASE("pivot averages a day's values") {
  std::vector<ObservationRecord> records{rec("AS14.01", "2014-02-26T09:00:00", "mood", 6.0),
                                         rec("AS14.01", "2014-02-26T18:00:00", "mood", 6.5)};
  auto t = pivot_daily(records);
  REQUIRE(t.users.size() == 1);
  REQUIRE(t.users[0].days.size() == 1);
  const auto& cell = *t.users[0].days[0].cells[0];
  CHECK(cell.mean == 6.25);
  CHECK(cell.count == 2);
}

TEST_CASE("pivot ignores absent values and keeps the registry") {
  std::vector<ObservationRecord> records{rec("A", "2014-02-26T09:00:00", "mood", 5.0),
                                         rec("A", "2014-02-26T10:00:00", "mood", std::nullopt),
                                         rec("A", "2014-02-26T11:00:00", "mood", 7.0),
                                         rec("A", "2014-02-26T11:00:00", "call", std::nullopt)};
  auto t = pivot_daily(records);
  CHECK(t.variables == std::vector<std::string>{"call", "mood"});
  const auto& row = t.users.at(0).days.at(0);
  CHECK_FALSE(row.cells[0].has_value());
  CHECK(row.cells[1]->mean == 6.0);
  CHECK(row.cells[1]->count == 2);
  CHECK(t.users[0].days.size() == 1);
}

TEST_CASE("single value and empty input") {
  auto t = pivot_daily(std::vector<ObservationRecord>{rec("A", "2014-02-26", "mood", 7.3)});
  CHECK(t.users[0].days[0].cells[0]->mean == 7.3);
  CHECK(pivot_daily({}).users.empty());
}

TEST_CASE("pivot properties on random record sets") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ObservationRecord> records;
    const std::size_t n = 1 + rng.index(80);
    for (std::size_t i = 0; i < n; ++i) {
      ObservationRecord r;
      r.user_id = "U" + std::to_string(rng.index(3));
      r.time.date = Date::from_serial(Date{2014, 3, 1}.serial() + static_cast<std::int64_t>(rng.index(6)));
      r.time.seconds_of_day = static_cast<int>(rng.index(86400));
      r.variable = "v" + std::to_string(rng.index(4));
      if (rng.uniform01() > 0.2) r.value = std::round(rng.uniform(-10, 10) * 8.0) / 8.0;
      records.push_back(r);
    }
    auto base = pivot_daily(records);

    // order of records does not matter
    auto shuffled = records;
    shuffle(std::span<ObservationRecord>(shuffled), rng);
    CHECK(pivot_daily(shuffled) == base);

    // counts add up to the present values; means sit within each day's range
    std::size_t present = 0;
    for (const auto& r : records) present += r.value.has_value();
    std::size_t counted = 0;
    for (const auto& u : base.users) {
      for (std::size_t d = 1; d < u.days.size(); ++d) CHECK(u.days[d - 1].date < u.days[d].date);
      for (const auto& row : u.days) {
        for (std::size_t v = 0; v < row.cells.size(); ++v) {
          if (!row.cells[v]) continue;
          counted += static_cast<std::size_t>(row.cells[v]->count);
          double lo = 1e300, hi = -1e300, sum = 0.0;
          for (const auto& r : records)
            if (r.value && r.user_id == u.user_id && r.time.date == row.date && r.variable == base.variables[v]) {
              lo = std::min(lo, *r.value);
              hi = std::max(hi, *r.value);
              sum += *r.value;
            }
          CHECK(row.cells[v]->mean >= lo);
          CHECK(row.cells[v]->mean <= hi);
          CHECK(row.cells[v]->mean == doctest::Approx(sum / row.cells[v]->count).epsilon(1e-12));
        }
      }
    }
    CHECK(counted == present);
  }
}
