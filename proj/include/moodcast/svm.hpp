#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "moodcast/common.hpp"
#include "moodcast/features.hpp"

namespace moodcast {

/// C-classification settings. degree, gamma and coef0 are kept so the whole
/// configuration is representable, but the linear kernel ignores them.
struct SvmParams {
  bool scale = true;
  std::string type = "C-classification";
  std::string kernel = "linear";
  int degree = 3;
  double gamma = 1.0;
  double coef0 = 0.0;
  double cost = 1.0;
  std::map<int, double> class_weights;  ///< per class multiplier on cost; absent = 1
  double epsilon = 0.1;                 ///< stop when the maximal KKT violation drops below this
  std::size_t max_iterations = 10'000'000;

  void validate() const;
  double weight_of(int cls) const;
};

/// Linear kernel matrix K(i,j) = <x_i, x_j>, one row per point. The parallel
/// path fills rows across threads; the serial path is the reference.
Matrix gram_matrix(const Matrix& points, Execution exec = Execution::parallel);
Matrix gram_matrix_serial(const Matrix& points);

/// Result of the soft-margin dual
///   max  sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij
///   s.t. 0 <= a_i <= C_i,  sum(a_i y_i) = 0
struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;       ///< b in f(x) = sum a_i y_i K(x_i, x) + b
  double objective = 0.0;  ///< dual objective at alpha
  double kkt_gap = 0.0;    ///< maximal violation m(a) - M(a) at exit
  std::size_t iterations = 0;
};

/// SMO with second-order working-set selection. `upper` holds C_i per point
/// and `labels` are +1/-1.
DualSolution solve_dual(const Matrix& gram, std::span<const int> labels, std::span<const double> upper,
                        double epsilon, std::size_t max_iterations);

/// Maximal KKT violation m(a) - M(a) of a dual point (0 when one side is empty).
double kkt_violation(const Matrix& gram, std::span<const int> labels, std::span<const double> upper,
                     std::span<const double> alpha);

double dual_objective(const Matrix& gram, std::span<const int> labels, std::span<const double> alpha);

struct BinarySvm {
  int lo = 0;  ///< class on the -1 side
  int hi = 0;  ///< class on the +1 side
  std::vector<double> alpha;
  std::vector<double> weights;  ///< w = sum a_i y_i x_i
  double bias = 0.0;
  std::vector<std::size_t> support;  ///< indices into the pair's training points
  double kkt_gap = 0.0;
  std::size_t iterations = 0;

  double decision(std::span<const double> x) const { return dot(weights, x) + bias; }
};

/// Trains one binary machine on rows of `points` labelled +1/-1. Uses
/// params.cost for both sides; the multiclass trainer applies class weights.
BinarySvm train_binary_svm(const Matrix& points, std::span<const int> labels, const SvmParams& params);
BinarySvm train_binary_svm(const Matrix& points, std::span<const int> labels, std::span<const double> upper,
                           const SvmParams& params);

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> sd;  ///< sample sd; 0 means the feature passes through

  std::vector<double> apply(std::span<const double> x) const;
};

struct SvmModel {
  std::vector<int> classes;         ///< ascending
  std::vector<BinarySvm> machines;  ///< one per pair (classes[i], classes[j]), i < j, row-major
  std::optional<Standardizer> standardizer;
  SvmParams params;
  std::size_t n_features = 0;
};

SvmModel train_multiclass(std::span<const ClassificationExample> examples, const SvmParams& params,
                          Execution exec = Execution::parallel);

/// One-vs-one vote. Ties go to the larger summed |decision| of the voting
/// machines, then to the smaller label.
int predict_svm(const SvmModel& model, std::span<const double> features);

nlohmann::ordered_json to_json(const SvmParams& params);
SvmParams svm_params_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SvmModel& model);
SvmModel svm_model_from_json(const nlohmann::json& j);

}  // namespace moodcast
