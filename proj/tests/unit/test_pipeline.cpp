#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "moodcast/pipeline.hpp"

using namespace moodcast;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_config(const fs::path& out) {
  PipelineConfig c;
  SynthConfig s;
  s.n_users = 4;
  s.min_days = 14;
  s.max_days = 16;
  c.synth = s;
  c.rnn.epochs = 15;
  c.output_dir = out.string();
  return c;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("moodcast-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config json round-trip keeps seeds and overrides") {
  PipelineConfig c;
  c.seed = 99;
  c.rnn_seed = 5;
  c.rnn.epochs = 123;
  c.svm.cost = 2.5;
  c.parse_mode = ParseMode::lenient;
  c.synth = SynthConfig{};
  auto back = config_from_json(nlohmann::json::parse(to_json(c).dump()));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.effective_rnn_seed() == 5);
  CHECK(back.effective_split_seed() == derive_seed(99, "split"));
  CHECK(back.rnn.epochs == 123);
}

TEST_CASE("config errors are reported") {
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"schema_version", 9}}), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"parse_mode", "loose"}}), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"svm", {{"kernel", "radial"}}}}), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"window", "five"}}), Error);
}

TEST_CASE("evaluate without trained models names the missing artifact") {
  auto c = small_config(scratch("no-models"));
  std::ostringstream out, err;
  CHECK(run("evaluate", c, out, err) != 0);
  CHECK(err.str().find("models/svm.json") != std::string::npos);
  CHECK_FALSE(fs::exists(c.output_dir));
}

TEST_CASE("preprocess averages raw values into the daily table") {
  const auto dir = scratch("preprocess");
  fs::create_directories(dir);
  std::ofstream(dir / "raw.csv") << ",id,time,variable,value\n"
                                    "1,AS14.01,2014-02-26 13:00:00.000,mood,6\n"
                                    "2,AS14.01,2014-02-26 15:00:00.000,mood,6.5\n"
                                    "3,AS14.01,2014-02-26 15:00:00.000,circumplex.valence,1\n"
                                    "4,AS14.01,2014-02-27 09:00:00.000,mood,7\n"
                                    "5,AS14.01,2014-02-27 09:00:00.000,circumplex.valence,NA\n";
  auto c = small_config(dir / "out");
  c.synth.reset();
  c.input_path = (dir / "raw.csv").string();
  c.prune.min_variable_coverage = 0.5;
  c.prune.min_day_coverage = 0.5;
  std::ostringstream out, err;
  REQUIRE(run("preprocess", c, out, err) == 0);
  const auto wide = slurp(dir / "out" / "tables" / "daily_wide.csv");
  CHECK(wide == "id,date,circumplex.valence,mood\nAS14.01,2014-02-26,1,6.25\nAS14.01,2014-02-27,1,7\n");
  const auto flags = slurp(dir / "out" / "tables" / "imputation_flags.csv");
  CHECK(flags == "id,date,circumplex.valence,mood\nAS14.01,2014-02-26,0,0\nAS14.01,2014-02-27,1,0\n");
  CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("malformed input fails in strict mode and is skipped in lenient mode") {
  const auto dir = scratch("malformed");
  fs::create_directories(dir);
  std::ofstream(dir / "raw.csv") << "id,time,variable,value\n"
                                    "A,2014-02-26,mood,6\nA,yesterday,mood,6\nA,2014-02-27,mood,7\n";
  auto c = small_config(dir / "out");
  c.synth.reset();
  c.input_path = (dir / "raw.csv").string();
  std::ostringstream out, err;
  CHECK(run("preprocess", c, out, err) == 1);
  CHECK(err.str().find("line 3") != std::string::npos);
  c.parse_mode = ParseMode::lenient;
  CHECK(run("preprocess", c, out, err) == 0);
}

TEST_CASE("all is reproducible, independent of the output directory and thread fan-out") {
  auto a = small_config(scratch("all-a"));
  auto b = small_config(scratch("all-b"));
  b.execution = Execution::serial;
  std::vector<std::string> wa, wb;
  const auto out_a = execute("all", a, wa);
  const auto out_b = execute("all", b, wb);
  REQUIRE(out_a.size() == out_b.size());
  for (const auto& [path, bytes] : out_a) {
    INFO(path);
    CHECK(out_b.at(path) == bytes);
  }
  for (const char* path : {"manifest.json", "models/svm.json", "models/rnn.json", "reports/report.json",
                           "reports/report.txt", "reports/baseline.json", "reports/preprocess.json",
                           "plots/predictions.csv", "plots/rnn_traces.csv", "tables/raw.csv"})
    CHECK(out_a.count(path) == 1);
}

TEST_CASE("stage seeds are independent") {
  auto a = small_config(scratch("seeds"));
  auto b = a;
  b.rnn_seed = 777;
  std::vector<std::string> w;
  const auto out_a = execute("all", a, w);
  const auto out_b = execute("all", b, w);
  CHECK(out_a.at("models/svm.json") == out_b.at("models/svm.json"));
  CHECK(out_a.at("tables/raw.csv") == out_b.at("tables/raw.csv"));
  CHECK(out_a.at("models/rnn.json") != out_b.at("models/rnn.json"));
}

TEST_CASE("staged commands reproduce the all run") {
  auto c = small_config(scratch("staged"));
  std::ostringstream out, err;
  for (const char* cmd : {"preprocess", "train-svm", "train-rnn", "baseline", "evaluate"}) {
    INFO(cmd);
    REQUIRE(run(cmd, c, out, err) == 0);
  }
  std::vector<std::string> w;
  const auto all = execute("all", c, w);
  CHECK(slurp(fs::path(c.output_dir) / "reports" / "report.json") == all.at("reports/report.json"));
  CHECK(slurp(fs::path(c.output_dir) / "models" / "rnn.json") == all.at("models/rnn.json"));
}

TEST_CASE("a manifest reproduces its run") {
  auto c = small_config(scratch("manifest"));
  c.seed = 31;
  std::vector<std::string> w;
  const auto first = execute("all", c, w);
  auto again = config_from_json(nlohmann::json::parse(first.at("manifest.json")));
  again.output_dir = c.output_dir;
  std::vector<std::string> w2;
  CHECK(execute("all", again, w2) == first);
}

TEST_CASE("synth command writes raw data and ground truth") {
  auto c = small_config(scratch("synth"));
  std::vector<std::string> w;
  const auto out = execute("synth", c, w);
  CHECK(out.count("tables/raw.csv") == 1);
  CHECK(out.count("tables/ground_truth.json") == 1);
  CHECK(parse_records(out.at("tables/raw.csv")).records == generate_dataset([&] {
          auto s = *c.synth;
          s.seed = c.effective_synth_seed();
          return s;
        }()).records);
  CHECK_THROWS_AS(execute("unknown", c, w), Error);
}

TEST_CASE("command-line flags override the config file") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  auto c = small_config(dir / "from-config");
  std::ofstream(dir / "config.json") << to_json(c).dump(2);
  const std::string cmd = std::string(MOODCAST_CLI_PATH) + " all -c " + (dir / "config.json").string() + " -o " +
                          (dir / "from-flags").string() + " --epochs 3 2>/dev/null >/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "from-flags" / "manifest.json"));
  CHECK(manifest["config"]["rnn"]["epochs"] == 3);
  CHECK(manifest["config"]["synth"]["n_users"] == 4);
  CHECK_FALSE(fs::exists(dir / "from-config"));
  const auto traces = slurp(dir / "from-flags" / "plots" / "rnn_traces.csv");
  CHECK(traces.find(",4,") == std::string::npos);
}
