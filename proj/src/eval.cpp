#include "moodcast/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace moodcast {

namespace {

std::vector<int> sorted_unique(std::span<const int> v) {
  std::vector<int> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::ptrdiff_t find_label(const std::vector<int>& labels, int x) {
  auto it = std::lower_bound(labels.begin(), labels.end(), x);
  return it != labels.end() && *it == x ? it - labels.begin() : -1;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json to_json(const Accuracy& a) {
  return {{"correct", a.correct}, {"total", a.total}, {"fraction", a.fraction}};
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<int> actual_labels, std::vector<int> predicted_labels,
                                 std::vector<std::vector<long>> counts)
    : actual_(std::move(actual_labels)), predicted_(std::move(predicted_labels)), counts_(std::move(counts)) {
  if (!std::is_sorted(actual_.begin(), actual_.end()) || !std::is_sorted(predicted_.begin(), predicted_.end()) ||
      std::adjacent_find(actual_.begin(), actual_.end()) != actual_.end() ||
      std::adjacent_find(predicted_.begin(), predicted_.end()) != predicted_.end())
    throw Error("confusion matrix: labels must be strictly increasing");
  if (counts_.size() != actual_.size()) throw Error("confusion matrix: row count does not match actual labels");
  for (const auto& row : counts_) {
    if (row.size() != predicted_.size()) throw Error("confusion matrix: column count does not match predicted labels");
    for (long c : row)
      if (c < 0) throw Error("confusion matrix: negative count");
  }
}

long ConfusionMatrix::at(int actual, int predicted) const {
  const auto r = find_label(actual_, actual), c = find_label(predicted_, predicted);
  if (r < 0 || c < 0) return 0;
  return counts_[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
}

long ConfusionMatrix::total() const {
  long t = 0;
  for (const auto& row : counts_)
    for (long c : row) t += c;
  return t;
}

ConfusionMatrix confusion_matrix(std::span<const int> actuals, std::span<const int> predictions) {
  if (actuals.size() != predictions.size())
    throw Error("confusion matrix: " + std::to_string(actuals.size()) + " actuals vs " +
                std::to_string(predictions.size()) + " predictions");
  if (actuals.empty()) throw Error("confusion matrix: no observations");
  auto rows = sorted_unique(actuals);
  auto cols = sorted_unique(predictions);
  std::vector<std::vector<long>> counts(rows.size(), std::vector<long>(cols.size(), 0));
  for (std::size_t i = 0; i < actuals.size(); ++i)
    ++counts[static_cast<std::size_t>(find_label(rows, actuals[i]))]
            [static_cast<std::size_t>(find_label(cols, predictions[i]))];
  return ConfusionMatrix(std::move(rows), std::move(cols), std::move(counts));
}

Accuracy accuracy(const ConfusionMatrix& m) {
  Accuracy a;
  a.total = m.total();
  if (a.total == 0) throw Error("accuracy: empty confusion matrix");
  for (int label : m.actual_labels()) a.correct += m.at(label, label);
  a.fraction = static_cast<double>(a.correct) / static_cast<double>(a.total);
  return a;
}

double rmse(std::span<const double> actuals, std::span<const double> predictions) {
  if (actuals.size() != predictions.size()) throw Error("rmse: length mismatch");
  if (actuals.empty()) throw Error("rmse: empty input");
  double ss = 0.0;
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    if (!std::isfinite(actuals[i]) || !std::isfinite(predictions[i])) throw Error("rmse: non-finite value");
    const double d = predictions[i] - actuals[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(actuals.size()));
}

EvaluationReport build_report(ReportInputs inputs) {
  EvaluationReport r;
  if (inputs.svm) {
    r.train_accuracy = accuracy(inputs.svm->train);
    r.test_accuracy = accuracy(inputs.svm->test);
    r.comparison.train = r.train_accuracy->fraction;
    r.comparison.test = r.test_accuracy->fraction;
  } else {
    r.missing_sections.push_back("svm");
  }
  if (inputs.benchmark_accuracy) {
    if (!(*inputs.benchmark_accuracy >= 0.0 && *inputs.benchmark_accuracy <= 1.0))
      throw Error("report: benchmark accuracy outside [0,1]");
    r.comparison.benchmark = inputs.benchmark_accuracy;
  } else {
    r.missing_sections.push_back("benchmark");
  }
  if (!inputs.rnn_rmse) r.missing_sections.push_back("rnn");
  if (!inputs.naive_rmse) r.missing_sections.push_back("naive");
  for (const auto* table : {&inputs.rnn_rmse, &inputs.naive_rmse})
    if (*table)
      for (const auto& [user, v] : **table)
        if (!(v >= 0.0)) throw Error("report: RMSE for " + user + " is negative or not a number");
  r.inputs = std::move(inputs);
  return r;
}

nlohmann::ordered_json to_json(const ConfusionMatrix& m) {
  return {{"actual_labels", m.actual_labels()}, {"predicted_labels", m.predicted_labels()}, {"counts", m.counts()}};
}

ConfusionMatrix confusion_matrix_from_json(const nlohmann::json& j) {
  return ConfusionMatrix(j.at("actual_labels").get<std::vector<int>>(), j.at("predicted_labels").get<std::vector<int>>(),
                         j.at("counts").get<std::vector<std::vector<long>>>());
}

nlohmann::ordered_json to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "moodcast.report";
  j["version"] = 1;
  j["complete"] = r.complete();
  j["missing_sections"] = r.missing_sections;
  j["comparison"] = {{"train_accuracy", optional_number(r.comparison.train)},
                     {"test_accuracy", optional_number(r.comparison.test)},
                     {"benchmark_accuracy", optional_number(r.comparison.benchmark)}};
  if (r.inputs.svm) {
    j["svm"] = {{"train", {{"matrix", to_json(r.inputs.svm->train)}, {"accuracy", to_json(*r.train_accuracy)}}},
                {"test", {{"matrix", to_json(r.inputs.svm->test)}, {"accuracy", to_json(*r.test_accuracy)}}}};
  } else {
    j["svm"] = nullptr;
  }
  auto rmse_table = [](const std::optional<std::map<std::string, double>>& t) {
    if (!t) return nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [user, v] : *t) o[user] = v;
    return o;
  };
  j["rnn_rmse"] = rmse_table(r.inputs.rnn_rmse);
  j["naive_rmse"] = rmse_table(r.inputs.naive_rmse);
  if (r.inputs.rnn_rmse && r.inputs.naive_rmse) {
    long users = 0, better = 0;
    for (const auto& [user, v] : *r.inputs.rnn_rmse) {
      auto it = r.inputs.naive_rmse->find(user);
      if (it == r.inputs.naive_rmse->end()) continue;
      ++users;
      if (v < it->second) ++better;
    }
    j["rnn_vs_naive"] = {{"users", users}, {"rnn_better", better}};
  } else {
    j["rnn_vs_naive"] = nullptr;
  }
  j["provenance"] = r.inputs.provenance;
  return j;
}

std::string render_matrix(const ConfusionMatrix& m, const std::string& title) {
  std::ostringstream out;
  out << pad(title, 16);
  for (int p : m.predicted_labels()) out << pad(std::to_string(p), 6);
  out << '\n';
  for (std::size_t r = 0; r < m.actual_labels().size(); ++r) {
    out << pad(std::to_string(m.actual_labels()[r]), 16);
    for (long c : m.counts()[r]) out << pad(std::to_string(c), 6);
    out << '\n';
  }
  return out.str();
}

std::string render_comparison(const ComparisonRow& row) {
  auto cell = [](const std::optional<double>& v) { return v ? fixed(*v, 3) : std::string("absent"); };
  std::ostringstream out;
  out << pad("prediction", 12) << pad("result_train", 14) << pad("result_test", 14) << "benchmark\n";
  out << pad("accuracy", 12) << pad(cell(row.train), 14) << pad(cell(row.test), 14) << cell(row.benchmark) << '\n';
  return out.str();
}

std::string render_text(const EvaluationReport& r) {
  std::ostringstream out;
  out << "== Accuracy comparison ==\n" << render_comparison(r.comparison) << '\n';
  if (r.inputs.svm) {
    out << "== SVM, training sample (" << r.train_accuracy->correct << "/" << r.train_accuracy->total << " correct) ==\n"
        << render_matrix(r.inputs.svm->train, "results_train") << '\n';
    out << "== SVM, testing sample (" << r.test_accuracy->correct << "/" << r.test_accuracy->total << " correct) ==\n"
        << render_matrix(r.inputs.svm->test, "result_test") << '\n';
  } else {
    out << "== SVM: absent ==\n\n";
  }
  auto table = [&](const char* title, const std::optional<std::map<std::string, double>>& t) {
    out << "== " << title << " ==\n";
    if (!t) {
      out << "absent\n\n";
      return;
    }
    out << pad("ID", 12) << "RMSE\n";
    for (const auto& [user, v] : *t) out << pad(user, 12) << fixed(v, 7) << '\n';
    out << '\n';
  };
  table("RMSE of RNN approach", r.inputs.rnn_rmse);
  table("RMSE of naive approach", r.inputs.naive_rmse);
  if (!r.complete()) {
    out << "incomplete report; missing:";
    for (const auto& s : r.missing_sections) out << ' ' << s;
    out << '\n';
  }
  return out.str();
}

}  // namespace moodcast
