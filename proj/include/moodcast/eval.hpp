#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "moodcast/common.hpp"

namespace moodcast {

/// Actual-class rows by predicted-class columns. The two label sets are
/// independent: a model may predict classes that never occur as actuals.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  ConfusionMatrix(std::vector<int> actual_labels, std::vector<int> predicted_labels,
                  std::vector<std::vector<long>> counts);

  const std::vector<int>& actual_labels() const { return actual_; }
  const std::vector<int>& predicted_labels() const { return predicted_; }
  const std::vector<std::vector<long>>& counts() const { return counts_; }

  /// Count for (actual, predicted); 0 for labels absent from an axis.
  long at(int actual, int predicted) const;
  long total() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<int> actual_;
  std::vector<int> predicted_;
  std::vector<std::vector<long>> counts_;
};

ConfusionMatrix confusion_matrix(std::span<const int> actuals, std::span<const int> predictions);

struct Accuracy {
  long correct = 0;
  long total = 0;
  double fraction = 0.0;
};

/// Diagonal cells are those whose row and column carry the same label.
Accuracy accuracy(const ConfusionMatrix& matrix);

double rmse(std::span<const double> actuals, std::span<const double> predictions);

struct ClassifierResults {
  ConfusionMatrix train;
  ConfusionMatrix test;
};

struct ReportInputs {
  std::optional<ClassifierResults> svm;
  std::optional<std::map<std::string, double>> rnn_rmse;    ///< per user, mood scale
  std::optional<std::map<std::string, double>> naive_rmse;  ///< per user, same target days
  std::optional<double> benchmark_accuracy;
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();
};

struct ComparisonRow {
  std::optional<double> train;
  std::optional<double> test;
  std::optional<double> benchmark;
};

struct EvaluationReport {
  ReportInputs inputs;
  ComparisonRow comparison;
  std::optional<Accuracy> train_accuracy;
  std::optional<Accuracy> test_accuracy;
  std::vector<std::string> missing_sections;

  bool complete() const { return missing_sections.empty(); }
};

EvaluationReport build_report(ReportInputs inputs);

/// Canonical machine-readable form; key order is fixed.
nlohmann::ordered_json to_json(const EvaluationReport& report);
nlohmann::ordered_json to_json(const ConfusionMatrix& matrix);
ConfusionMatrix confusion_matrix_from_json(const nlohmann::json& j);

/// Plain-text tables: confusion matrices, the accuracy comparison row and the
/// per-user RMSE tables.
std::string render_text(const EvaluationReport& report);
std::string render_comparison(const ComparisonRow& row);
std::string render_matrix(const ConfusionMatrix& matrix, const std::string& title);

}  // namespace moodcast
