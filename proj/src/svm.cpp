#include "moodcast/svm.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace moodcast {

namespace {

constexpr double kTau = 1e-12;  // curvature floor for non-positive-definite pairs

bool at_upper(double a, double c) { return a >= c; }
bool at_lower(double a) { return a <= 0.0; }

// i may grow along y_i (a_i moves toward its y-direction bound)
bool in_up(int y, double a, double c) { return y > 0 ? !at_upper(a, c) : !at_lower(a); }
bool in_low(int y, double a, double c) { return y > 0 ? !at_lower(a) : !at_upper(a, c); }

}  // namespace

void SvmParams::validate() const {
  if (kernel != "linear") throw Error("svm: only the linear kernel is supported (got '" + kernel + "')");
  if (type != "C-classification") throw Error("svm: only C-classification is supported (got '" + type + "')");
  if (!(cost > 0.0)) throw Error("svm: cost must be positive");
  if (!(epsilon > 0.0)) throw Error("svm: epsilon must be positive");
  for (const auto& [cls, w] : class_weights)
    if (!(w > 0.0)) throw Error("svm: class weight for " + std::to_string(cls) + " must be positive");
}

double SvmParams::weight_of(int cls) const {
  auto it = class_weights.find(cls);
  return it == class_weights.end() ? 1.0 : it->second;
}

Matrix gram_matrix_serial(const Matrix& points) {
  const std::size_t n = points.rows();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i, j) = dot(points.row(i), points.row(j));
  return k;
}

Matrix gram_matrix(const Matrix& points, Execution exec) {
  if (exec == Execution::serial) return gram_matrix_serial(points);
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
  Matrix k(points.rows(), points.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = 0; j < n; ++j)
      k(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          dot(points.row(static_cast<std::size_t>(i)), points.row(static_cast<std::size_t>(j)));
  return k;
}

double dual_objective(const Matrix& gram, std::span<const int> labels, std::span<const double> alpha) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      quad += alpha[i] * alpha[j] * labels[i] * labels[j] * gram(i, j);
  }
  return linear - 0.5 * quad;
}

double kkt_violation(const Matrix& gram, std::span<const int> labels, std::span<const double> upper,
                     std::span<const double> alpha) {
  const std::size_t n = alpha.size();
  double m = -std::numeric_limits<double>::infinity();
  double big_m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double g = -1.0;
    for (std::size_t j = 0; j < n; ++j) g += labels[i] * labels[j] * gram(i, j) * alpha[j];
    const double v = -labels[i] * g;
    if (in_up(labels[i], alpha[i], upper[i])) m = std::max(m, v);
    if (in_low(labels[i], alpha[i], upper[i])) big_m = std::min(big_m, v);
  }
  if (!std::isfinite(m) || !std::isfinite(big_m)) return 0.0;
  return std::max(0.0, m - big_m);
}

DualSolution solve_dual(const Matrix& gram, std::span<const int> labels, std::span<const double> upper,
                        double epsilon, std::size_t max_iterations) {
  const std::size_t n = labels.size();
  if (gram.rows() != n || gram.cols() != n || upper.size() != n) throw Error("svm: dual problem size mismatch");

  auto q = [&](std::size_t i, std::size_t j) { return labels[i] * labels[j] * gram(i, j); };

  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  auto& alpha = sol.alpha;
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a

  for (;;) {
    // first index: maximal violation in I_up
    double gmax = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t i_sel = -1;
    for (std::size_t t = 0; t < n; ++t)
      if (in_up(labels[t], alpha[t], upper[t]) && -labels[t] * grad[t] >= gmax) {
        gmax = -labels[t] * grad[t];
        i_sel = static_cast<std::ptrdiff_t>(t);
      }

    // second index: largest second-order decrease in I_low
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::ptrdiff_t j_sel = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(labels[t], alpha[t], upper[t])) continue;
      gmax2 = std::max(gmax2, labels[t] * grad[t]);
      if (i_sel < 0) continue;
      const double grad_diff = gmax + labels[t] * grad[t];
      if (grad_diff <= 0.0) continue;
      const auto i = static_cast<std::size_t>(i_sel);
      double curvature = gram(i, i) + gram(t, t) - 2.0 * gram(i, t);
      if (curvature <= 0.0) curvature = kTau;
      const double decrease = -(grad_diff * grad_diff) / curvature;
      if (decrease <= best) {
        best = decrease;
        j_sel = static_cast<std::ptrdiff_t>(t);
      }
    }

    sol.kkt_gap = (i_sel < 0 || !std::isfinite(gmax2)) ? 0.0 : std::max(0.0, gmax + gmax2);
    if (i_sel < 0 || j_sel < 0 || gmax + gmax2 < epsilon) break;
    if (sol.iterations >= max_iterations)
      throw Error("svm: SMO did not reach tolerance " + format_number(epsilon) + " within " +
                  std::to_string(max_iterations) + " iterations (gap " + format_number(gmax + gmax2) + ")");
    ++sol.iterations;

    const auto i = static_cast<std::size_t>(i_sel);
    const auto j = static_cast<std::size_t>(j_sel);
    const double ci = upper[i], cj = upper[j];
    const double old_ai = alpha[i], old_aj = alpha[j];

    // Analytic two-variable step with clipping to the box, keeping
    // y_i a_i + y_j a_j fixed.
    if (labels[i] != labels[j]) {
      double curvature = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (curvature <= 0.0) curvature = kTau;
      const double delta = (-grad[i] - grad[j]) / curvature;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > ci - cj) {
        if (alpha[i] > ci) {
          alpha[i] = ci;
          alpha[j] = ci - diff;
        }
      } else if (alpha[j] > cj) {
        alpha[j] = cj;
        alpha[i] = cj + diff;
      }
    } else {
      double curvature = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (curvature <= 0.0) curvature = kTau;
      const double delta = (grad[i] - grad[j]) / curvature;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > ci) {
        if (alpha[i] > ci) {
          alpha[i] = ci;
          alpha[j] = sum - ci;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > cj) {
        if (alpha[j] > cj) {
          alpha[j] = cj;
          alpha[i] = sum - cj;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
    for (std::size_t k = 0; k < n; ++k) grad[k] += q(i, k) * dai + q(j, k) * daj;
  }

  // b = -rho; rho averages y_i G_i over free vectors, else the midpoint of
  // the feasible interval implied by the bounded ones.
  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = labels[t] * grad[t];
    if (at_upper(alpha[t], upper[t])) {
      if (labels[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (at_lower(alpha[t])) {
      if (labels[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      free_sum += yg;
    }
  }
  double rho = 0.0;
  if (n_free > 0) rho = free_sum / static_cast<double>(n_free);
  else if (std::isfinite(ub) && std::isfinite(lb)) rho = 0.5 * (ub + lb);
  else if (std::isfinite(ub)) rho = ub;
  else if (std::isfinite(lb)) rho = lb;
  sol.bias = -rho;
  sol.objective = dual_objective(gram, labels, alpha);
  return sol;
}

BinarySvm train_binary_svm(const Matrix& points, std::span<const int> labels, std::span<const double> upper,
                           const SvmParams& params) {
  params.validate();
  const std::size_t n = points.rows();
  if (labels.size() != n || upper.size() != n) throw Error("svm: label count does not match point count");
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y == 1) has_pos = true;
    else if (y == -1) has_neg = true;
    else throw Error("svm: binary labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw Error("svm: binary training needs both classes");
  for (double v : points.values())
    if (!std::isfinite(v)) throw Error("svm: non-finite feature value");

  const Matrix gram = gram_matrix(points);
  DualSolution sol = solve_dual(gram, labels, upper, params.epsilon, params.max_iterations);

  BinarySvm m;
  m.weights.assign(points.cols(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.alpha[i] <= 0.0) continue;
    m.support.push_back(i);
    for (std::size_t f = 0; f < points.cols(); ++f) m.weights[f] += sol.alpha[i] * labels[i] * points(i, f);
  }
  m.alpha = std::move(sol.alpha);
  m.bias = sol.bias;
  m.kkt_gap = sol.kkt_gap;
  m.iterations = sol.iterations;
  return m;
}

BinarySvm train_binary_svm(const Matrix& points, std::span<const int> labels, const SvmParams& params) {
  const std::vector<double> upper(labels.size(), params.cost);
  return train_binary_svm(points, labels, upper, params);
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t f = 0; f < out.size(); ++f)
    if (sd[f] > 0.0) out[f] = (out[f] - mean[f]) / sd[f];
  return out;
}

SvmModel train_multiclass(std::span<const ClassificationExample> examples, const SvmParams& params, Execution exec) {
  params.validate();
  if (examples.empty()) throw Error("svm: no training examples");

  SvmModel model;
  model.params = params;
  model.n_features = examples.front().features.size();
  for (const auto& ex : examples) {
    if (ex.features.size() != model.n_features) throw Error("svm: inconsistent feature vector lengths");
    model.classes.push_back(ex.target_class);
  }
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());
  if (model.classes.size() < 2) throw Error("svm: training data contains a single class");

  const std::size_t n = examples.size(), d = model.n_features;
  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i) std::copy(examples[i].features.begin(), examples[i].features.end(), x.row(i).begin());

  if (params.scale) {
    Standardizer s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    for (std::size_t f = 0; f < d; ++f) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += x(i, f);
      s.mean[f] = sum / static_cast<double>(n);
      if (n > 1) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) ss += (x(i, f) - s.mean[f]) * (x(i, f) - s.mean[f]);
        s.sd[f] = std::sqrt(ss / static_cast<double>(n - 1));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto scaled = s.apply(x.row(i));
      std::copy(scaled.begin(), scaled.end(), x.row(i).begin());
    }
    model.standardizer = std::move(s);
  }

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < model.classes.size(); ++a)
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) pairs.emplace_back(model.classes[a], model.classes[b]);

  model.machines.resize(pairs.size());
  std::vector<std::exception_ptr> failures(pairs.size());

  auto train_pair = [&](std::size_t p) {
    const auto [lo, hi] = pairs[p];
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i)
      if (examples[i].target_class == lo || examples[i].target_class == hi) rows.push_back(i);
    Matrix px(rows.size(), d);
    std::vector<int> labels(rows.size());
    std::vector<double> upper(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      std::copy_n(x.row(rows[r]).begin(), d, px.row(r).begin());
      const int cls = examples[rows[r]].target_class;
      labels[r] = cls == hi ? 1 : -1;
      upper[r] = params.cost * params.weight_of(cls);
    }
    BinarySvm m = train_binary_svm(px, labels, upper, params);
    m.lo = lo;
    m.hi = hi;
    model.machines[p] = std::move(m);
  };

  const auto n_pairs = static_cast<std::ptrdiff_t>(pairs.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t p = 0; p < n_pairs; ++p) {
      try {
        train_pair(static_cast<std::size_t>(p));
      } catch (...) {
        failures[static_cast<std::size_t>(p)] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t p = 0; p < n_pairs; ++p) train_pair(static_cast<std::size_t>(p));
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return model;
}

int predict_svm(const SvmModel& model, std::span<const double> features) {
  if (features.size() != model.n_features)
    throw Error("svm: feature length " + std::to_string(features.size()) + " does not match model (" +
                std::to_string(model.n_features) + ")");
  const std::vector<double> x =
      model.standardizer ? model.standardizer->apply(features) : std::vector<double>(features.begin(), features.end());

  const std::size_t k = model.classes.size();
  std::vector<int> votes(k, 0);
  std::vector<double> strength(k, 0.0);
  auto slot = [&](int cls) {
    return static_cast<std::size_t>(std::lower_bound(model.classes.begin(), model.classes.end(), cls) -
                                    model.classes.begin());
  };
  for (const auto& m : model.machines) {
    const double d = m.decision(x);
    const std::size_t winner = slot(d > 0.0 ? m.hi : m.lo);
    ++votes[winner];
    strength[winner] += std::abs(d);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < k; ++c)
    if (votes[c] > votes[best] || (votes[c] == votes[best] && strength[c] > strength[best])) best = c;
  return model.classes[best];
}

nlohmann::ordered_json to_json(const SvmParams& p) {
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (const auto& [cls, w] : p.class_weights) weights[std::to_string(cls)] = w;
  return {{"scale", p.scale}, {"type", p.type},   {"kernel", p.kernel},         {"degree", p.degree},
          {"gamma", p.gamma}, {"coef0", p.coef0}, {"cost", p.cost},             {"class_weights", weights},
          {"epsilon", p.epsilon}, {"max_iterations", p.max_iterations}};
}

SvmParams svm_params_from_json(const nlohmann::json& j) {
  SvmParams p;
  p.scale = j.value("scale", p.scale);
  p.type = j.value("type", p.type);
  p.kernel = j.value("kernel", p.kernel);
  p.degree = j.value("degree", p.degree);
  p.gamma = j.value("gamma", p.gamma);
  p.coef0 = j.value("coef0", p.coef0);
  p.cost = j.value("cost", p.cost);
  p.epsilon = j.value("epsilon", p.epsilon);
  p.max_iterations = j.value("max_iterations", p.max_iterations);
  if (j.contains("class_weights"))
    for (const auto& [key, w] : j.at("class_weights").items()) p.class_weights[std::stoi(key)] = w.get<double>();
  p.validate();
  return p;
}

nlohmann::ordered_json to_json(const SvmModel& model) {
  nlohmann::ordered_json j;
  j["schema"] = "moodcast.svm_model";
  j["version"] = 1;
  j["params"] = to_json(model.params);
  j["n_features"] = model.n_features;
  j["classes"] = model.classes;
  if (model.standardizer)
    j["standardizer"] = {{"mean", model.standardizer->mean}, {"sd", model.standardizer->sd}};
  else
    j["standardizer"] = nullptr;
  auto& machines = j["machines"] = nlohmann::ordered_json::array();
  for (const auto& m : model.machines)
    machines.push_back({{"lo", m.lo},
                        {"hi", m.hi},
                        {"weights", m.weights},
                        {"bias", m.bias},
                        {"alpha", m.alpha},
                        {"support", m.support},
                        {"kkt_gap", m.kkt_gap},
                        {"iterations", m.iterations}});
  return j;
}

SvmModel svm_model_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "moodcast.svm_model") throw Error("svm: not an SVM model document");
  if (j.value("version", 0) != 1) throw Error("svm: unsupported model version");
  SvmModel model;
  model.params = svm_params_from_json(j.at("params"));
  model.n_features = j.at("n_features").get<std::size_t>();
  model.classes = j.at("classes").get<std::vector<int>>();
  if (!j.at("standardizer").is_null())
    model.standardizer = Standardizer{j.at("standardizer").at("mean").get<std::vector<double>>(),
                                      j.at("standardizer").at("sd").get<std::vector<double>>()};
  for (const auto& m : j.at("machines")) {
    BinarySvm b;
    b.lo = m.at("lo");
    b.hi = m.at("hi");
    b.weights = m.at("weights").get<std::vector<double>>();
    b.bias = m.at("bias");
    b.alpha = m.at("alpha").get<std::vector<double>>();
    b.support = m.at("support").get<std::vector<std::size_t>>();
    b.kkt_gap = m.at("kkt_gap");
    b.iterations = m.at("iterations");
    if (b.weights.size() != model.n_features) throw Error("svm: machine weight length mismatch");
    model.machines.push_back(std::move(b));
  }
  const std::size_t k = model.classes.size();
  if (model.machines.size() != k * (k - 1) / 2) throw Error("svm: machine count does not match class count");
  return model;
}

}  // namespace moodcast
