#include <doctest.h>

#include <cmath>

#include "moodcast/baseline.hpp"
#include "moodcast/eval.hpp"
#include "moodcast/random.hpp"
#include "support/generators.hpp"

using namespace moodcast;

namespace {

std::vector<MoodPoint> series_of(const std::vector<double>& moods) {
  std::vector<MoodPoint> out;
  for (std::size_t i = 0; i < moods.size(); ++i)
    out.push_back({Date::from_serial(16000 + static_cast<std::int64_t>(2 * i)), moods[i]});
  return out;
}

double naive_rmse(const std::vector<MoodPoint>& s) {
  const auto preds = predict_naive("U", s);
  std::vector<double> a, p;
  for (const auto& x : preds) {
    a.push_back(x.actual);
    p.push_back(x.predicted);
  }
  return rmse(a, p);
}

}  // namespace

TEST_CASE("persistence examples") {
  auto constant = predict_naive("U", series_of({7, 7, 7}));
  REQUIRE(constant.size() == 2);
  for (const auto& p : constant) CHECK(p.predicted == p.actual);
  CHECK(naive_rmse(series_of({6, 8, 6})) == 2.0);
  CHECK(predict_naive("U", series_of({7})).empty());
  CHECK(predict_naive("U", series_of({})).empty());

  auto s = series_of({5, 6});
  CHECK(predict_naive("U", s)[0].target_date == s[1].date);
  std::swap(s[0], s[1]);
  CHECK_THROWS_AS(predict_naive("U", s), Error);
}

TEST_CASE("class accuracy examples") {
  const std::vector<std::vector<MoodPoint>> constant{series_of({7, 7, 7, 7})};
  CHECK(naive_class_accuracy(constant) == 1.0);
  const std::vector<std::vector<MoodPoint>> alternating{series_of({6, 7, 6, 7})};
  CHECK(naive_class_accuracy(alternating) == 0.0);
  const std::vector<std::vector<MoodPoint>> rounding{series_of({6.4, 6.4, 7.6})};
  CHECK(naive_class_accuracy(rounding) == 0.5);
  const std::vector<std::vector<MoodPoint>> pooled{series_of({6, 6, 6}), series_of({7, 8})};
  CHECK(naive_class_accuracy(pooled) == doctest::Approx(2.0 / 3.0));
  const std::vector<std::vector<MoodPoint>> nothing{series_of({7}), series_of({})};
  CHECK_THROWS_AS(naive_class_accuracy(nothing), Error);
}

TEST_CASE("mood_series skips days without mood") {
  UserSeries u{"U", {}};
  u.days.push_back(DayRow{Date{2014, 3, 1}, {DailyCell{6, 1}, std::nullopt}});
  u.days.push_back(DayRow{Date{2014, 3, 2}, {std::nullopt, DailyCell{1, 1}}});
  u.days.push_back(DayRow{Date{2014, 3, 3}, {DailyCell{8, 1}, DailyCell{1, 1}}});
  auto s = mood_series(u, 0);
  REQUIRE(s.size() == 2);
  CHECK(s[1].mood == 8.0);
}

TEST_CASE("persistence RMSE equals the successive-difference recomputation") {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const auto moods = testgen::random_series(rng, 2 + rng.index(40), 1, 10);
    double ss = 0.0;
    for (std::size_t t = 1; t < moods.size(); ++t) ss += (moods[t] - moods[t - 1]) * (moods[t] - moods[t - 1]);
    const double expect = std::sqrt(ss / static_cast<double>(moods.size() - 1));
    CHECK(std::abs(naive_rmse(series_of(moods)) - expect) <= 1e-12);
  }
}

TEST_CASE("constant series are predicted perfectly") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const double level = rng.uniform(1, 10);
    const auto s = series_of(std::vector<double>(2 + rng.index(10), level));
    CHECK(naive_rmse(s) == 0.0);
    const std::vector<std::vector<MoodPoint>> one{s};
    CHECK(naive_class_accuracy(one) == 1.0);
  }
}
