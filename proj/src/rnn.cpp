#include "moodcast/rnn.hpp"

#include <cmath>
#include <exception>
#include <numeric>

#include "moodcast/random.hpp"

namespace moodcast {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_inputs(const RnnModel& model, const Matrix& inputs) {
  if (inputs.rows() == 0) throw Error("rnn: empty input sequence");
  if (inputs.cols() != model.input_dim())
    throw Error("rnn: input has " + std::to_string(inputs.cols()) + " variables, model expects " +
                std::to_string(model.input_dim()));
}

}  // namespace

void RnnConfig::validate() const {
  if (hidden_dim == 0) throw Error("rnn: hidden_dim must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw Error("rnn: learning_rate must be non-negative");
  if (epochs == 0) throw Error("rnn: epochs must be positive");
  if (seq_len == 0) throw Error("rnn: seq_len must be positive");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error("rnn: test_fraction must lie in (0,1)");
  if (!(init_half_width >= 0.0)) throw Error("rnn: init_half_width must be non-negative");
}

RnnModel init_rnn(std::size_t input_dim, std::size_t hidden_dim, const RnnConfig& config) {
  if (input_dim == 0 || hidden_dim == 0) throw Error("rnn: dimensions must be positive");
  Rng rng(derive_seed(config.seed, "rnn-init"));
  const double w = config.init_half_width;
  RnnModel m;
  m.w_in = Matrix(input_dim, hidden_dim);
  m.w_rec = Matrix(hidden_dim, hidden_dim);
  m.b_h.assign(hidden_dim, 0.0);
  m.w_out.assign(hidden_dim, 0.0);
  for (double& v : m.w_in.values()) v = rng.uniform(-w, w);
  for (double& v : m.w_rec.values()) v = rng.uniform(-w, w);
  for (double& v : m.w_out) v = rng.uniform(-w, w);
  return m;
}

ForwardPass forward(const RnnModel& model, const Matrix& inputs) {
  check_inputs(model, inputs);
  const std::size_t steps = inputs.rows(), n_in = model.input_dim(), n_h = model.hidden_dim();
  ForwardPass out{0.0, Matrix(steps, n_h)};
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t k = 0; k < n_h; ++k) {
      double z = model.b_h[k];
      for (std::size_t i = 0; i < n_in; ++i) z += inputs(t, i) * model.w_in(i, k);
      if (t > 0)
        for (std::size_t j = 0; j < n_h; ++j) z += out.hidden(t - 1, j) * model.w_rec(j, k);
      out.hidden(t, k) = sigmoid(z);
    }
  }
  out.prediction = sigmoid(dot(out.hidden.row(steps - 1), model.w_out) + model.b_out);
  return out;
}

double loss_and_gradient(const RnnModel& model, const Matrix& inputs, double target, RnnGradient& grad) {
  const ForwardPass fp = forward(model, inputs);
  const std::size_t steps = inputs.rows(), n_in = model.input_dim(), n_h = model.hidden_dim();

  grad.w_in = Matrix(n_in, n_h);
  grad.w_rec = Matrix(n_h, n_h);
  grad.b_h.assign(n_h, 0.0);
  grad.w_out.assign(n_h, 0.0);

  const double err = fp.prediction - target;
  const double d_out = err * fp.prediction * (1.0 - fp.prediction);
  grad.b_out = d_out;
  std::vector<double> d_h(n_h), d_z(n_h);
  for (std::size_t k = 0; k < n_h; ++k) {
    grad.w_out[k] = d_out * fp.hidden(steps - 1, k);
    d_h[k] = d_out * model.w_out[k];
  }

  for (std::size_t t = steps; t-- > 0;) {
    for (std::size_t k = 0; k < n_h; ++k) {
      const double h = fp.hidden(t, k);
      d_z[k] = d_h[k] * h * (1.0 - h);
      grad.b_h[k] += d_z[k];
      for (std::size_t i = 0; i < n_in; ++i) grad.w_in(i, k) += inputs(t, i) * d_z[k];
    }
    if (t == 0) break;
    for (std::size_t j = 0; j < n_h; ++j) {
      double back = 0.0;
      for (std::size_t k = 0; k < n_h; ++k) {
        grad.w_rec(j, k) += fp.hidden(t - 1, j) * d_z[k];
        back += model.w_rec(j, k) * d_z[k];
      }
      d_h[j] = back;
    }
  }
  return 0.5 * err * err;
}

std::vector<double> flatten_parameters(const RnnModel& m) {
  std::vector<double> out;
  out.insert(out.end(), m.w_in.values().begin(), m.w_in.values().end());
  out.insert(out.end(), m.w_rec.values().begin(), m.w_rec.values().end());
  out.insert(out.end(), m.b_h.begin(), m.b_h.end());
  out.insert(out.end(), m.w_out.begin(), m.w_out.end());
  out.push_back(m.b_out);
  return out;
}

void assign_parameters(RnnModel& m, std::span<const double> values) {
  const std::size_t n = m.w_in.values().size() + m.w_rec.values().size() + m.b_h.size() + m.w_out.size() + 1;
  if (values.size() != n) throw Error("rnn: parameter vector has the wrong length");
  auto it = values.begin();
  for (double& v : m.w_in.values()) v = *it++;
  for (double& v : m.w_rec.values()) v = *it++;
  for (double& v : m.b_h) v = *it++;
  for (double& v : m.w_out) v = *it++;
  m.b_out = *it;
}

std::vector<double> flatten(const RnnGradient& g) {
  std::vector<double> out;
  out.insert(out.end(), g.w_in.values().begin(), g.w_in.values().end());
  out.insert(out.end(), g.w_rec.values().begin(), g.w_rec.values().end());
  out.insert(out.end(), g.b_h.begin(), g.b_h.end());
  out.insert(out.end(), g.w_out.begin(), g.w_out.end());
  out.push_back(g.b_out);
  return out;
}

double mean_squared_error(const RnnModel& model, std::span<const SequenceExample> examples) {
  if (examples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& ex : examples) {
    const double e = forward(model, ex.inputs).prediction - ex.target;
    sum += e * e;
  }
  return sum / static_cast<double>(examples.size());
}

TrainedRnn train_rnn(std::span<const SequenceExample> examples, const RnnConfig& config) {
  config.validate();
  if (examples.empty()) throw Error("rnn: no training examples");
  const std::size_t n_in = examples.front().inputs.cols();
  for (const auto& ex : examples) {
    if (ex.user_id != examples.front().user_id) throw Error("rnn: training examples span several users");
    if (ex.inputs.cols() != n_in) throw Error("rnn: training examples have inconsistent widths");
  }

  TrainedRnn out{init_rnn(n_in, config.hidden_dim, config), {}};
  RnnModel& m = out.model;
  m.user_id = examples.front().user_id;
  out.trace.mse.reserve(config.epochs);

  Rng order_rng(derive_seed(config.seed, "rnn-shuffle"));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  RnnGradient g;
  const double rate = config.learning_rate;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), order_rng);
    for (std::size_t idx : order) {
      const double loss = loss_and_gradient(m, examples[idx].inputs, examples[idx].target, g);
      if (!std::isfinite(loss))
        throw TrainingDiverged(epoch, "rnn: non-finite loss at epoch " + std::to_string(epoch) + " for user " +
                                          m.user_id);
      auto wi = m.w_in.values();
      auto gwi = g.w_in.values();
      for (std::size_t i = 0; i < wi.size(); ++i) wi[i] -= rate * gwi[i];
      auto wr = m.w_rec.values();
      auto gwr = g.w_rec.values();
      for (std::size_t i = 0; i < wr.size(); ++i) wr[i] -= rate * gwr[i];
      for (std::size_t k = 0; k < m.b_h.size(); ++k) {
        m.b_h[k] -= rate * g.b_h[k];
        m.w_out[k] -= rate * g.w_out[k];
      }
      m.b_out -= rate * g.b_out;
    }
    const double mse = mean_squared_error(m, examples);
    if (!std::isfinite(mse))
      throw TrainingDiverged(epoch, "rnn: training error diverged at epoch " + std::to_string(epoch) + " for user " +
                                        m.user_id);
    out.trace.mse.push_back(mse);
  }
  return out;
}

double predict_mood(const RnnModel& model, const Matrix& inputs) {
  if (!model.scaling) throw Error("rnn: model for " + model.user_id + " has no scaling parameters attached");
  return inverse_scaling(forward(model, inputs).prediction, model.scaling->at(model.mood_variable));
}

std::vector<TrainedRnn> train_users(std::span<const UserTrainingJob> jobs, const RnnConfig& config,
                                    const ScalingParams& scaling, Execution exec) {
  std::vector<TrainedRnn> out(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  auto train_one = [&](std::size_t u) {
    out[u] = train_rnn(jobs[u].train, config);
    out[u].model.user_id = jobs[u].user_id;
    out[u].model.scaling = scaling;
  };
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t u = 0; u < n; ++u) {
      try {
        train_one(static_cast<std::size_t>(u));
      } catch (...) {
        failures[static_cast<std::size_t>(u)] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t u = 0; u < n; ++u) train_one(static_cast<std::size_t>(u));
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return out;
}

nlohmann::ordered_json to_json(const RnnConfig& c) {
  return {{"hidden_dim", c.hidden_dim}, {"learning_rate", c.learning_rate},     {"epochs", c.epochs},
          {"seq_len", c.seq_len},       {"seed", c.seed},                       {"test_fraction", c.test_fraction},
          {"init_half_width", c.init_half_width}};
}

RnnConfig rnn_config_from_json(const nlohmann::json& j) {
  RnnConfig c;
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.seq_len = j.value("seq_len", c.seq_len);
  c.seed = j.value("seed", c.seed);
  c.test_fraction = j.value("test_fraction", c.test_fraction);
  c.init_half_width = j.value("init_half_width", c.init_half_width);
  c.validate();
  return c;
}

nlohmann::ordered_json to_json(const RnnModel& m) {
  nlohmann::ordered_json j;
  j["schema"] = "moodcast.rnn_model";
  j["version"] = 1;
  j["user_id"] = m.user_id;
  j["input_dim"] = m.input_dim();
  j["hidden_dim"] = m.hidden_dim();
  j["w_in"] = std::vector<double>(m.w_in.values().begin(), m.w_in.values().end());
  j["w_rec"] = std::vector<double>(m.w_rec.values().begin(), m.w_rec.values().end());
  j["b_h"] = m.b_h;
  j["w_out"] = m.w_out;
  j["b_out"] = m.b_out;
  j["mood_variable"] = m.mood_variable;
  if (m.scaling) {
    auto& s = j["scaling"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.scaling->variables.size(); ++i)
      s.push_back({{"variable", m.scaling->variables[i]},
                   {"min", m.scaling->ranges[i].min},
                   {"max", m.scaling->ranges[i].max}});
  } else {
    j["scaling"] = nullptr;
  }
  return j;
}

RnnModel rnn_model_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "moodcast.rnn_model") throw Error("rnn: not an RNN model document");
  if (j.value("version", 0) != 1) throw Error("rnn: unsupported model version");
  const auto d = j.at("input_dim").get<std::size_t>();
  const auto h = j.at("hidden_dim").get<std::size_t>();
  RnnModel m;
  m.user_id = j.at("user_id");
  m.w_in = Matrix(d, h);
  m.w_rec = Matrix(h, h);
  const auto w_in = j.at("w_in").get<std::vector<double>>();
  const auto w_rec = j.at("w_rec").get<std::vector<double>>();
  m.b_h = j.at("b_h").get<std::vector<double>>();
  m.w_out = j.at("w_out").get<std::vector<double>>();
  if (w_in.size() != d * h || w_rec.size() != h * h || m.b_h.size() != h || m.w_out.size() != h)
    throw Error("rnn: weight arrays do not match declared dimensions");
  std::copy(w_in.begin(), w_in.end(), m.w_in.values().begin());
  std::copy(w_rec.begin(), w_rec.end(), m.w_rec.values().begin());
  m.b_out = j.at("b_out");
  m.mood_variable = j.value("mood_variable", std::string(kMoodVariable));
  if (!j.at("scaling").is_null()) {
    ScalingParams s;
    for (const auto& e : j.at("scaling")) {
      s.variables.push_back(e.at("variable"));
      s.ranges.push_back(Range{e.at("min"), e.at("max")});
    }
    m.scaling = std::move(s);
  }
  return m;
}

}  // namespace moodcast
