#include <benchmark/benchmark.h>

#include "moodcast/random.hpp"
#include "moodcast/rnn.hpp"
#include "moodcast/svm.hpp"

using namespace moodcast;

namespace {

Execution mode(const benchmark::State& state) { return state.range(1) ? Execution::parallel : Execution::serial; }

std::vector<ClassificationExample> blobs(std::size_t n, std::size_t classes) {
  Rng rng(7);
  std::vector<ClassificationExample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(i % classes);
    out[i].target_class = 3 + cls;
    out[i].features.resize(19);
    for (auto& v : out[i].features) v = 0.4 * cls + rng.normal();
  }
  return out;
}

std::vector<UserTrainingJob> jobs(std::size_t users) {
  Rng rng(11);
  std::vector<UserTrainingJob> out(users);
  for (std::size_t u = 0; u < users; ++u) {
    out[u].user_id = "U" + std::to_string(u);
    for (int k = 0; k < 30; ++k) {
      SequenceExample e;
      e.inputs = Matrix(5, 6);
      for (double& v : e.inputs.values()) v = rng.uniform01();
      e.target = rng.uniform01();
      out[u].train.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace

static void BM_GramMatrix(benchmark::State& state) {
  Rng rng(3);
  Matrix x(static_cast<std::size_t>(state.range(0)), 19);
  for (double& v : x.values()) v = rng.uniform(-2, 2);
  const auto exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(x, exec));
}
BENCHMARK(BM_GramMatrix)->ArgsProduct({{250, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_MulticlassSvm(benchmark::State& state) {
  const auto data = blobs(static_cast<std::size_t>(state.range(0)), 6);
  SvmParams p;
  const auto exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(train_multiclass(data, p, exec));
}
BENCHMARK(BM_MulticlassSvm)->ArgsProduct({{300, 900}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_TrainUsers(benchmark::State& state) {
  const auto work = jobs(static_cast<std::size_t>(state.range(0)));
  RnnConfig cfg;
  cfg.epochs = 50;
  ScalingParams scaling;
  scaling.variables = {"mood"};
  scaling.ranges = {Range{1.0, 10.0}};
  const auto exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(train_users(work, cfg, scaling, exec));
}
BENCHMARK(BM_TrainUsers)->ArgsProduct({{8, 27}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
