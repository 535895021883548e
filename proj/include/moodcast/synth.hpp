#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "moodcast/common.hpp"
#include "moodcast/ingest.hpp"

namespace moodcast {

struct SensorSpec {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  int min_obs = 1;  ///< raw rows per day
  int max_obs = 3;
  double missing_rate = 0.1;  ///< probability a day's cell is NA
  bool informative = true;    ///< enters the mood dynamics
};

/// mood_{t+1} = clamp(persistence * mood_t + (1 - persistence) * level_u
///                    + gain * g_u(sensors_t) + noise_sd * N(0,1), 1, 10)
/// where g_u is a per-user signed mix of the sensors rescaled to [-1,1].
struct MoodDynamics {
  double persistence = 0.4;
  double gain = 1.5;
  double noise_sd = 0.3;
  double level_lo = 6.5;  ///< per-user resting level range
  double level_hi = 8.0;
  int min_obs = 3;
  int max_obs = 6;
  double missing_rate = 0.05;
};

struct SynthConfig {
  std::size_t n_users = 27;
  std::size_t min_days = 9;
  std::size_t max_days = 21;
  std::vector<SensorSpec> sensors = default_sensors();
  MoodDynamics mood;
  std::uint64_t seed = 2204;
  Date start{2014, 2, 17};

  static std::vector<SensorSpec> default_sensors();
  void validate() const;
};

/// Generating parameters of one user plus the latent daily state.
struct UserTruth {
  std::string user_id;
  double level = 0.0;
  std::vector<double> weights;  ///< per sensor, 0 for non-informative ones
  Date first_date;
  std::size_t days = 0;
  Matrix latent_sensors;            ///< days x sensors
  std::vector<double> latent_mood;  ///< per day
};

struct SyntheticDataset {
  std::vector<ObservationRecord> records;
  std::vector<UserTruth> truth;
};

SyntheticDataset generate_dataset(const SynthConfig& config);

/// Noise-free next-day mood for a user given today's latent state.
double expected_next_mood(const SynthConfig& config, const UserTruth& user, double mood,
                          std::span<const double> sensors);

/// Sidecar document: per-user dynamics parameters (no noise draws).
nlohmann::ordered_json ground_truth_json(const SynthConfig& config, const SyntheticDataset& data);

nlohmann::ordered_json to_json(const SynthConfig& config);
SynthConfig synth_config_from_json(const nlohmann::json& j);

}  // namespace moodcast
