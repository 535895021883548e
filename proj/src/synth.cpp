#include "moodcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "moodcast/preprocess.hpp"
#include "moodcast/random.hpp"

namespace moodcast {

std::vector<SensorSpec> SynthConfig::default_sensors() {
  return {
      {"activity", 0.0, 1.0, 4, 8, 0.05, true},
      {"screen", 0.0, 300.0, 3, 6, 0.10, true},
      {"call", 0.0, 5.0, 1, 3, 0.10, true},
      {"sms", 0.0, 5.0, 1, 3, 0.10, true},
      {"circumplex.valence", -2.0, 2.0, 3, 5, 0.05, true},
      // sparse on purpose; coverage pruning should drop it
      {"appCat.game", 0.0, 600.0, 1, 2, 0.85, false},
  };
}

void SynthConfig::validate() const {
  if (n_users == 0) throw Error("synth: n_users must be positive");
  if (min_days < 1 || max_days < min_days) throw Error("synth: invalid days-per-user range");
  auto check_rate = [](double r, const std::string& what) {
    if (!(r >= 0.0 && r <= 1.0)) throw Error("synth: missing rate of " + what + " must lie in [0,1]");
  };
  for (const auto& s : sensors) {
    if (s.name.empty() || s.name == kMoodVariable) throw Error("synth: invalid sensor name '" + s.name + "'");
    if (!(s.hi > s.lo)) throw Error("synth: sensor " + s.name + " has a degenerate range");
    if (s.min_obs < 1 || s.max_obs < s.min_obs) throw Error("synth: sensor " + s.name + " has invalid counts");
    check_rate(s.missing_rate, s.name);
  }
  check_rate(mood.missing_rate, "mood");
  if (!(mood.noise_sd >= 0.0)) throw Error("synth: noise_sd must be non-negative");
  if (!(mood.level_hi >= mood.level_lo) || mood.level_lo < 1.0 || mood.level_hi > 10.0)
    throw Error("synth: mood level range must lie within [1,10]");
  if (mood.min_obs < 1 || mood.max_obs < mood.min_obs) throw Error("synth: invalid mood observation counts");
}

double expected_next_mood(const SynthConfig& config, const UserTruth& user, double mood,
                          std::span<const double> sensors) {
  double g = 0.0;
  for (std::size_t k = 0; k < config.sensors.size(); ++k) {
    const auto& s = config.sensors[k];
    g += user.weights[k] * (2.0 * (sensors[k] - s.lo) / (s.hi - s.lo) - 1.0);
  }
  const auto& d = config.mood;
  return std::clamp(d.persistence * mood + (1.0 - d.persistence) * user.level + d.gain * g, 1.0, 10.0);
}

SyntheticDataset generate_dataset(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SyntheticDataset out;
  const std::size_t n_sensors = config.sensors.size();

  struct Row {
    int seconds;
    std::size_t variable;  // n_sensors denotes mood
    std::optional<double> value;
  };

  for (std::size_t u = 0; u < config.n_users; ++u) {
    UserTruth truth;
    char id[32];
    std::snprintf(id, sizeof id, "AS14.%02zu", u + 1);
    truth.user_id = id;
    truth.days = config.min_days + static_cast<std::size_t>(rng.index(config.max_days - config.min_days + 1));
    truth.first_date = Date::from_serial(config.start.serial() + static_cast<std::int64_t>(rng.index(14)));
    truth.level = rng.uniform(config.mood.level_lo, config.mood.level_hi);

    truth.weights.assign(n_sensors, 0.0);
    double norm = 0.0;
    for (std::size_t k = 0; k < n_sensors; ++k) {
      const double w = rng.uniform(-1.0, 1.0);
      if (config.sensors[k].informative) {
        truth.weights[k] = w;
        norm += std::abs(w);
      }
    }
    if (norm > 0.0)
      for (double& w : truth.weights) w /= norm;

    truth.latent_sensors = Matrix(truth.days, n_sensors);
    truth.latent_mood.resize(truth.days);
    for (std::size_t d = 0; d < truth.days; ++d)
      for (std::size_t k = 0; k < n_sensors; ++k)
        truth.latent_sensors(d, k) = rng.uniform(config.sensors[k].lo, config.sensors[k].hi);

    truth.latent_mood[0] = std::clamp(truth.level + config.mood.noise_sd * rng.normal(), 1.0, 10.0);
    for (std::size_t d = 1; d < truth.days; ++d) {
      const double next = expected_next_mood(config, truth, truth.latent_mood[d - 1], truth.latent_sensors.row(d - 1));
      truth.latent_mood[d] = std::clamp(next + config.mood.noise_sd * rng.normal(), 1.0, 10.0);
    }

    for (std::size_t d = 0; d < truth.days; ++d) {
      const Date date = Date::from_serial(truth.first_date.serial() + static_cast<std::int64_t>(d));
      std::vector<Row> rows;
      auto emit = [&](std::size_t var, int min_obs, int max_obs, double missing, auto&& draw) {
        const int k = min_obs + static_cast<int>(rng.index(static_cast<std::uint64_t>(max_obs - min_obs + 1)));
        const bool absent = rng.uniform01() < missing;
        for (int i = 0; i < k; ++i) {
          const int seconds = 8 * 3600 + static_cast<int>(rng.index(15 * 3600));
          rows.push_back({seconds, var, absent ? std::nullopt : std::optional<double>(draw())});
        }
      };
      const double m = truth.latent_mood[d];
      const double jitter = config.mood.noise_sd;
      emit(n_sensors, config.mood.min_obs, config.mood.max_obs, config.mood.missing_rate,
           [&] { return std::clamp(m + jitter * rng.uniform(-1.0, 1.0), 1.0, 10.0); });
      for (std::size_t k = 0; k < n_sensors; ++k) {
        const auto& s = config.sensors[k];
        const double level = truth.latent_sensors(d, k);
        const double spread = 0.02 * (s.hi - s.lo);
        emit(k, s.min_obs, s.max_obs, s.missing_rate,
             [&] { return std::clamp(level + spread * rng.uniform(-1.0, 1.0), s.lo, s.hi); });
      }

      auto name_of = [&](std::size_t v) -> std::string {
        return v == n_sensors ? std::string(kMoodVariable) : config.sensors[v].name;
      };
      std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        return std::tie(a.seconds, a.variable) < std::tie(b.seconds, b.variable);
      });
      for (const auto& r : rows)
        out.records.push_back({truth.user_id, Timestamp{date, r.seconds}, name_of(r.variable), r.value});
    }
    out.truth.push_back(std::move(truth));
  }
  return out;
}

nlohmann::ordered_json ground_truth_json(const SynthConfig& config, const SyntheticDataset& data) {
  nlohmann::ordered_json j;
  j["schema"] = "moodcast.ground_truth";
  j["version"] = 1;
  j["dynamics"] = {{"persistence", config.mood.persistence},
                   {"gain", config.mood.gain},
                   {"noise_sd", config.mood.noise_sd},
                   {"formula",
                    "mood[t+1] = clamp(persistence*mood[t] + (1-persistence)*level + gain*sum_k w_k*z_k[t] + "
                    "noise_sd*N(0,1), 1, 10), z_k = 2*(x_k - lo_k)/(hi_k - lo_k) - 1"}};
  auto& sensors = j["sensors"] = nlohmann::ordered_json::array();
  for (const auto& s : config.sensors) sensors.push_back({{"name", s.name}, {"lo", s.lo}, {"hi", s.hi}});
  auto& users = j["users"] = nlohmann::ordered_json::array();
  for (const auto& t : data.truth)
    users.push_back({{"id", t.user_id},
                     {"level", t.level},
                     {"weights", t.weights},
                     {"first_date", t.first_date.iso()},
                     {"days", t.days}});
  return j;
}

nlohmann::ordered_json to_json(const SynthConfig& c) {
  nlohmann::ordered_json sensors = nlohmann::ordered_json::array();
  for (const auto& s : c.sensors)
    sensors.push_back({{"name", s.name},
                       {"lo", s.lo},
                       {"hi", s.hi},
                       {"min_obs", s.min_obs},
                       {"max_obs", s.max_obs},
                       {"missing_rate", s.missing_rate},
                       {"informative", s.informative}});
  return {{"n_users", c.n_users},
          {"min_days", c.min_days},
          {"max_days", c.max_days},
          {"sensors", sensors},
          {"mood",
           {{"persistence", c.mood.persistence},
            {"gain", c.mood.gain},
            {"noise_sd", c.mood.noise_sd},
            {"level_lo", c.mood.level_lo},
            {"level_hi", c.mood.level_hi},
            {"min_obs", c.mood.min_obs},
            {"max_obs", c.mood.max_obs},
            {"missing_rate", c.mood.missing_rate}}},
          {"seed", c.seed},
          {"start", c.start.iso()}};
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
  SynthConfig c;
  c.n_users = j.value("n_users", c.n_users);
  c.min_days = j.value("min_days", c.min_days);
  c.max_days = j.value("max_days", c.max_days);
  c.seed = j.value("seed", c.seed);
  if (j.contains("start")) {
    auto d = parse_date(j.at("start").get<std::string>());
    if (!d) throw Error("synth: invalid start date");
    c.start = *d;
  }
  if (j.contains("sensors")) {
    c.sensors.clear();
    for (const auto& s : j.at("sensors")) {
      SensorSpec spec;
      spec.name = s.at("name");
      spec.lo = s.value("lo", spec.lo);
      spec.hi = s.value("hi", spec.hi);
      spec.min_obs = s.value("min_obs", spec.min_obs);
      spec.max_obs = s.value("max_obs", spec.max_obs);
      spec.missing_rate = s.value("missing_rate", spec.missing_rate);
      spec.informative = s.value("informative", spec.informative);
      c.sensors.push_back(std::move(spec));
    }
  }
  if (j.contains("mood")) {
    const auto& m = j.at("mood");
    c.mood.persistence = m.value("persistence", c.mood.persistence);
    c.mood.gain = m.value("gain", c.mood.gain);
    c.mood.noise_sd = m.value("noise_sd", c.mood.noise_sd);
    c.mood.level_lo = m.value("level_lo", c.mood.level_lo);
    c.mood.level_hi = m.value("level_hi", c.mood.level_hi);
    c.mood.min_obs = m.value("min_obs", c.mood.min_obs);
    c.mood.max_obs = m.value("max_obs", c.mood.max_obs);
    c.mood.missing_rate = m.value("missing_rate", c.mood.missing_rate);
  }
  c.validate();
  return c;
}

}  // namespace moodcast
