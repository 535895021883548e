#include <doctest.h>

#include <cmath>

#include "moodcast/random.hpp"
#include "moodcast/svm.hpp"
#include "oracles/qp_oracle.hpp"

using namespace moodcast;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

SvmParams tight(double cost) {
  SvmParams p;
  p.cost = cost;
  p.epsilon = 1e-10;
  return p;
}

ClassificationExample example(std::vector<double> f, int cls) { return {std::move(f), cls, "U", Date{}}; }

std::vector<ClassificationExample> three_clusters(Rng& rng, std::size_t per_class) {
  const double centers[3][2] = {{0, 0}, {6, 0}, {3, 5}};
  std::vector<ClassificationExample> out;
  for (std::size_t i = 0; i < per_class; ++i)
    for (int c = 0; c < 3; ++c) {
      const double r = rng.uniform(0, 1), t = rng.uniform(0, 2 * 3.141592653589793);
      out.push_back(example({centers[c][0] + r * std::cos(t), centers[c][1] + r * std::sin(t)}, 6 + c));
    }
  return out;
}

}  // namespace

TEST_CASE("two-point analytic solution") {
  const Matrix x = to_matrix({{-1}, {1}});
  const std::vector<int> y{-1, 1};
  auto m = train_binary_svm(x, y, tight(1.0));
  CHECK(m.alpha[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(m.alpha[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(m.weights[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(m.bias) < 1e-9);
  const double neg[] = {-1.0}, pos[] = {1.0};
  CHECK(m.decision(neg) < 0);
  CHECK(m.decision(pos) > 0);
}

TEST_CASE("hard-margin limit puts both points on the margin") {
  const Matrix x = to_matrix({{0, 0}, {2, 1}});
  const std::vector<int> y{-1, 1};
  auto m = train_binary_svm(x, y, tight(1e6));
  CHECK(std::abs(m.decision(x.row(0)) + 1.0) < 1e-6);
  CHECK(std::abs(m.decision(x.row(1)) - 1.0) < 1e-6);
}

TEST_CASE("duplicating the data keeps the sign pattern") {
  const Matrix x = to_matrix({{0.2, 1.0}, {-1.0, 0.3}, {1.5, -0.4}, {0.1, 0.1}});
  const std::vector<int> y{1, -1, 1, -1};
  const Matrix xx = to_matrix({{0.2, 1.0}, {-1.0, 0.3}, {1.5, -0.4}, {0.1, 0.1},
                               {0.2, 1.0}, {-1.0, 0.3}, {1.5, -0.4}, {0.1, 0.1}});
  const std::vector<int> yy{1, -1, 1, -1, 1, -1, 1, -1};
  auto a = train_binary_svm(x, y, tight(1.0));
  auto b = train_binary_svm(xx, yy, tight(1.0));
  for (std::size_t i = 0; i < 4; ++i) CHECK((a.decision(x.row(i)) > 0) == (b.decision(x.row(i)) > 0));
}

TEST_CASE("solver agrees with the brute-force oracle on tiny problems") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.index(3), d = 1 + rng.index(2);
    std::vector<std::vector<double>> pts(n, std::vector<double>(d));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : pts[i]) v = rng.uniform(-2, 2);
      y[i] = i == 0 ? 1 : i == 1 ? -1 : (rng.uniform01() < 0.5 ? 1 : -1);
    }
    const double c = std::vector<double>{0.3, 1.0, 5.0}[rng.index(3)];
    const auto expect = oracle::solve_small_dual(pts, y, c);
    const Matrix x = to_matrix(pts);
    auto m = train_binary_svm(x, y, tight(c));
    const Matrix k = gram_matrix_serial(x);
    CHECK(dual_objective(k, y, m.alpha) == doctest::Approx(expect.objective).epsilon(1e-6));
    for (std::size_t f = 0; f < d; ++f) CHECK(std::abs(m.weights[f] - expect.w[f]) < 1e-6);
    if (!expect.unique) continue;
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(m.alpha[i] - expect.alpha[i]) < 1e-6);
  }
}

TEST_CASE("oracle flags an enclosed point as a non-unique optimum") {
  // one positive between three negatives: w = 0 and the negatives can trade alpha
  const std::vector<std::vector<double>> pts{{0.0}, {-1.0}, {1.0}, {2.0}};
  const std::vector<int> y{1, -1, -1, -1};
  const auto expect = oracle::solve_small_dual(pts, y, 5.0);
  CHECK_FALSE(expect.unique);
  CHECK(std::abs(expect.w[0]) < 1e-12);
  auto m = train_binary_svm(to_matrix(pts), y, tight(5.0));
  CHECK(dual_objective(gram_matrix_serial(to_matrix(pts)), y, m.alpha) == doctest::Approx(expect.objective));
  const auto pair = oracle::solve_small_dual({{-1.0}, {1.0}}, {-1, 1}, 1.0);
  CHECK(pair.unique);
}

TEST_CASE("gram kernels agree") {
  Rng rng(1);
  Matrix x(57, 4);
  for (double& v : x.values()) v = rng.uniform(-3, 3);
  CHECK(gram_matrix(x, Execution::parallel) == gram_matrix_serial(x));
  CHECK(gram_matrix(x, Execution::serial) == gram_matrix_serial(x));
}

TEST_CASE("binary training rejects bad input") {
  const Matrix x = to_matrix({{0.0}, {1.0}});
  CHECK_THROWS_AS(train_binary_svm(x, std::vector<int>{1, 1}, tight(1)), Error);
  const Matrix bad = to_matrix({{0.0}, {NAN}});
  CHECK_THROWS_AS(train_binary_svm(bad, std::vector<int>{1, -1}, tight(1)), Error);
  SvmParams rbf;
  rbf.kernel = "radial";
  CHECK_THROWS_AS(rbf.validate(), Error);
}

TEST_CASE("separable clusters are learned") {
  Rng rng(2204);
  auto data = three_clusters(rng, 100);
  auto model = train_multiclass(data, SvmParams{});
  CHECK(model.machines.size() == 3);
  std::size_t correct = 0;
  for (const auto& ex : data) correct += predict_svm(model, ex.features) == ex.target_class;
  CHECK(static_cast<double>(correct) / static_cast<double>(data.size()) >= 0.98);
}

TEST_CASE("four classes give six machines; a singleton class is trainable") {
  std::vector<ClassificationExample> data{example({0}, 5), example({1}, 6), example({2}, 7), example({3}, 8),
                                          example({1.1}, 6), example({2.1}, 7), example({3.1}, 8)};
  auto model = train_multiclass(data, SvmParams{});
  CHECK(model.machines.size() == 6);
  CHECK(model.classes == std::vector<int>{5, 6, 7, 8});
  CHECK_THROWS_AS(train_multiclass(std::vector<ClassificationExample>{example({0}, 5), example({1}, 5)}, SvmParams{}),
                  Error);
  CHECK_THROWS_AS(predict_svm(model, std::vector<double>{1, 2}), Error);
}

TEST_CASE("cyclic vote tie goes to the larger summed margin") {
  SvmModel m;
  m.classes = {1, 2, 3};
  m.n_features = 1;
  auto machine = [](int lo, int hi, double bias) {
    BinarySvm b;
    b.lo = lo;
    b.hi = hi;
    b.weights = {0.0};
    b.bias = bias;
    return b;
  };
  m.machines = {machine(1, 2, -0.5), machine(1, 3, 2.0), machine(2, 3, -1.0)};
  CHECK(predict_svm(m, std::vector<double>{0.0}) == 3);
  m.machines[1].bias = 0.25;
  CHECK(predict_svm(m, std::vector<double>{0.0}) == 2);
  m.machines = {machine(1, 2, -1.0), machine(1, 3, 1.0), machine(2, 3, -1.0)};
  CHECK(predict_svm(m, std::vector<double>{0.0}) == 1);
}

TEST_CASE("standardization makes predictions invariant to feature rescaling") {
  Rng rng(8);
  auto data = three_clusters(rng, 30);
  auto scaled = data;
  for (auto& ex : scaled) {
    ex.features[0] = ex.features[0] * 1000.0 + 3.0;
    ex.features[1] *= 0.01;
  }
  auto a = train_multiclass(data, SvmParams{});
  auto b = train_multiclass(scaled, SvmParams{});
  for (std::size_t i = 0; i < data.size(); ++i)
    CHECK(predict_svm(a, data[i].features) == predict_svm(b, scaled[i].features));
}

TEST_CASE("constant features pass through standardization") {
  std::vector<ClassificationExample> data{example({0, 5}, 6), example({1, 5}, 7), example({0.1, 5}, 6),
                                          example({0.9, 5}, 7)};
  auto model = train_multiclass(data, SvmParams{});
  CHECK(model.standardizer->sd[1] == 0.0);
  CHECK(predict_svm(model, std::vector<double>{0.95, 5}) == 7);
}

TEST_CASE("retraining is bit-identical and serial matches parallel") {
  Rng rng(4);
  auto data = three_clusters(rng, 40);
  const auto a = to_json(train_multiclass(data, SvmParams{}, Execution::parallel)).dump();
  const auto b = to_json(train_multiclass(data, SvmParams{}, Execution::parallel)).dump();
  const auto c = to_json(train_multiclass(data, SvmParams{}, Execution::serial)).dump();
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("model json round-trip") {
  Rng rng(6);
  auto data = three_clusters(rng, 10);
  SvmParams p;
  p.class_weights[7] = 2.0;
  auto model = train_multiclass(data, p);
  auto back = svm_model_from_json(nlohmann::json::parse(to_json(model).dump()));
  CHECK(to_json(back).dump() == to_json(model).dump());
  for (const auto& ex : data) CHECK(predict_svm(back, ex.features) == predict_svm(model, ex.features));
  CHECK_THROWS_AS(svm_model_from_json(nlohmann::json{{"schema", "other"}}), Error);
}
