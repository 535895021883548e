#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "moodcast/common.hpp"
#include "moodcast/features.hpp"
#include "moodcast/preprocess.hpp"

namespace moodcast {

struct RnnConfig {
  std::size_t hidden_dim = 4;
  double learning_rate = 0.07;
  std::size_t epochs = 10000;
  std::size_t seq_len = 5;
  std::uint64_t seed = 2204;
  double test_fraction = 0.3;
  double init_half_width = 0.5;

  void validate() const;
};

/// Single-layer Elman network with a sigmoid readout:
///   h_t = sigmoid(x_t W_in + h_{t-1} W_rec + b_h),  y = sigmoid(h_L . w_out + b_out)
struct RnnModel {
  Matrix w_in;   ///< inputs x hidden
  Matrix w_rec;  ///< hidden x hidden
  std::vector<double> b_h;
  std::vector<double> w_out;
  double b_out = 0.0;
  std::optional<ScalingParams> scaling;  ///< needed to map predictions back to mood
  std::string mood_variable = std::string(kMoodVariable);
  std::string user_id;

  std::size_t input_dim() const { return w_in.rows(); }
  std::size_t hidden_dim() const { return w_in.cols(); }
  bool operator==(const RnnModel&) const = default;
};

/// Uniform [-w, w] weights from the config's rnn-init stream, zero biases.
RnnModel init_rnn(std::size_t input_dim, std::size_t hidden_dim, const RnnConfig& config);

struct ForwardPass {
  double prediction = 0.0;
  Matrix hidden;  ///< L x H, row t is h_t
};

ForwardPass forward(const RnnModel& model, const Matrix& inputs);

/// Same shapes as the model's parameters.
struct RnnGradient {
  Matrix w_in;
  Matrix w_rec;
  std::vector<double> b_h;
  std::vector<double> w_out;
  double b_out = 0.0;
};

/// Loss 1/2 (y_hat - target)^2 and its exact gradient by backpropagation
/// through all time steps.
double loss_and_gradient(const RnnModel& model, const Matrix& inputs, double target, RnnGradient& grad);

/// Parameters in a fixed order: w_in, w_rec, b_h, w_out, b_out.
std::vector<double> flatten_parameters(const RnnModel& model);
void assign_parameters(RnnModel& model, std::span<const double> values);
std::vector<double> flatten(const RnnGradient& grad);

struct TrainingTrace {
  std::vector<double> mse;  ///< training-set MSE after each epoch
};

struct TrainedRnn {
  RnnModel model;
  TrainingTrace trace;
};

class TrainingDiverged : public Error {
 public:
  TrainingDiverged(std::size_t epoch, const std::string& what) : Error(what), epoch_(epoch) {}
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

/// Plain per-example SGD with BPTT; examples visited in a freshly shuffled
/// order each epoch (rnn-shuffle stream). Deterministic for a given seed.
TrainedRnn train_rnn(std::span<const SequenceExample> examples, const RnnConfig& config);

/// Mean squared error of the scaled predictions.
double mean_squared_error(const RnnModel& model, std::span<const SequenceExample> examples);

/// forward() mapped back onto the mood scale with the attached scaling.
double predict_mood(const RnnModel& model, const Matrix& inputs);

struct UserTrainingJob {
  std::string user_id;
  std::vector<SequenceExample> train;
};

/// Trains one model per job, attaching `scaling`. Users are independent; the
/// parallel path distributes them over threads with identical results.
std::vector<TrainedRnn> train_users(std::span<const UserTrainingJob> jobs, const RnnConfig& config,
                                    const ScalingParams& scaling, Execution exec = Execution::parallel);

nlohmann::ordered_json to_json(const RnnConfig& config);
RnnConfig rnn_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const RnnModel& model);
RnnModel rnn_model_from_json(const nlohmann::json& j);

}  // namespace moodcast
