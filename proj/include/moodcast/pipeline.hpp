#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "moodcast/baseline.hpp"
#include "moodcast/eval.hpp"
#include "moodcast/features.hpp"
#include "moodcast/ingest.hpp"
#include "moodcast/preprocess.hpp"
#include "moodcast/rnn.hpp"
#include "moodcast/svm.hpp"
#include "moodcast/synth.hpp"

namespace moodcast {

inline constexpr const char* kToolName = "moodcast";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

/// Everything a run needs. Per-stage seeds default to streams derived from
/// the global seed; an explicit value pins that stage alone.
struct PipelineConfig {
  std::optional<std::string> input_path;
  std::optional<SynthConfig> synth;
  ParseMode parse_mode = ParseMode::strict;
  PruneConfig prune;
  std::size_t window = 5;
  SplitSpec svm_split{0.1, SplitMode::global_random, 0};
  SplitMode rnn_split_mode = SplitMode::per_user_chronological;
  SvmParams svm;
  RnnConfig rnn;
  std::string output_dir = "moodcast-out";
  std::uint64_t seed = 2204;
  std::optional<std::uint64_t> synth_seed;
  std::optional<std::uint64_t> split_seed;
  std::optional<std::uint64_t> rnn_seed;
  Execution execution = Execution::parallel;

  void validate() const;
  std::uint64_t effective_synth_seed() const;
  std::uint64_t effective_split_seed() const;
  std::uint64_t effective_rnn_seed() const;
};

/// Reads a config document. A run manifest is accepted too (its "config"
/// member is used), so a manifest alone reproduces its run.
PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const PipelineConfig& config);

/// Input loaded and preprocessed up to model-ready examples.
struct PreparedData {
  std::string source;  ///< "file" or "synth"
  std::string raw_csv;
  std::vector<ObservationRecord> records;
  std::size_t skipped_rows = 0;
  std::optional<SyntheticDataset> synthetic;
  UserDayTable daily;
  UserDayTable filled;
  std::vector<std::string> retained_variables;
  std::vector<std::string> dropped_users;
  ScalingParams scaling;
  ClassificationSet classification;
  SequenceSet sequences;
  std::size_t mood_index = 0;
  std::vector<std::string> warnings;
};

PreparedData prepare(const PipelineConfig& config);

struct SvmStage {
  Split<ClassificationExample> split;
};
SvmStage split_for_svm(const PipelineConfig& config, const PreparedData& data);

struct RnnUserData {
  std::string user_id;
  Split<SequenceExample> split;
};
/// Per-user holdout; users with fewer than two examples are skipped with a warning.
std::vector<RnnUserData> split_for_rnn(const PipelineConfig& config, const PreparedData& data,
                                       std::vector<std::string>& warnings);

struct SeriesPoint {
  std::string user_id;
  Date date;
  double actual = 0.0;
  double predicted = 0.0;
};

/// Naive predictions on exactly the RNN test targets (previous retained day).
std::vector<SeriesPoint> naive_on_targets(const PreparedData& data, const RnnUserData& user);

/// Files produced by a command, keyed by path relative to the output directory.
using OutputSet = std::map<std::string, std::string>;

/// Runs one command (synth, preprocess, train-svm, train-rnn, baseline,
/// evaluate, all) and returns its outputs, manifest included. Reads existing
/// artifacts from config.output_dir where a command needs them. Throws on failure.
OutputSet execute(const std::string& command, const PipelineConfig& config, std::vector<std::string>& warnings);

/// Writes every output under `dir`, creating directories.
void write_outputs(const std::string& dir, const OutputSet& outputs);

/// execute + write_outputs; diagnostics go to `err`. Returns the exit status.
int run(const std::string& command, const PipelineConfig& config, std::ostream& out, std::ostream& err);

}  // namespace moodcast
