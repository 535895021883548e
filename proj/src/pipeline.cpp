#include "moodcast/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "moodcast/random.hpp"

namespace moodcast {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

const char* mode_name(SplitMode m) {
  return m == SplitMode::global_random ? "global-random" : "per-user-chronological";
}

SplitMode parse_mode_name(const std::string& s) {
  if (s == "global-random") return SplitMode::global_random;
  if (s == "per-user-chronological") return SplitMode::per_user_chronological;
  throw Error("config: unknown split mode '" + s + "'");
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(what + ": cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string fingerprint(std::string_view bytes) { return "fnv1a64:" + hex64(fnv1a64(bytes)); }

double mood_on(const UserSeries& user, std::size_t mood_index, const Date& date, std::size_t* position = nullptr) {
  auto it = std::lower_bound(user.days.begin(), user.days.end(), date,
                             [](const DayRow& d, const Date& x) { return d.date < x; });
  if (it == user.days.end() || it->date != date) throw Error("internal: no day " + date.iso() + " for " + user.user_id);
  if (position) *position = static_cast<std::size_t>(it - user.days.begin());
  return it->cells[mood_index]->mean;
}

const UserSeries& find_user(const UserDayTable& table, const std::string& id) {
  for (const auto& u : table.users)
    if (u.user_id == id) return u;
  throw Error("internal: unknown user " + id);
}

void series_csv_header(std::ostream& out) { out << "id,date,actual,predicted,model\n"; }

void series_csv_row(std::ostream& out, const SeriesPoint& p, const char* model) {
  out << p.user_id << ',' << p.date.iso() << ',' << format_number(p.actual) << ',' << format_number(p.predicted) << ','
      << model << '\n';
}

struct RnnPredictions {
  std::vector<SeriesPoint> test;
  std::vector<SeriesPoint> fit;
};

RnnPredictions predict_rnn_user(const PreparedData& data, const RnnUserData& user, const RnnModel& model) {
  const UserSeries& series = find_user(data.filled, user.user_id);
  RnnPredictions out;
  for (const auto& ex : user.split.train)
    out.fit.push_back({user.user_id, ex.target_date, mood_on(series, data.mood_index, ex.target_date),
                       predict_mood(model, ex.inputs)});
  for (const auto& ex : user.split.test)
    out.test.push_back({user.user_id, ex.target_date, mood_on(series, data.mood_index, ex.target_date),
                        predict_mood(model, ex.inputs)});
  return out;
}

double series_rmse(const std::vector<SeriesPoint>& pts) {
  std::vector<double> a, p;
  for (const auto& x : pts) {
    a.push_back(x.actual);
    p.push_back(x.predicted);
  }
  return rmse(a, p);
}

double benchmark_accuracy(const PreparedData& data) {
  std::vector<std::vector<MoodPoint>> all;
  for (const auto& u : data.filled.users) all.push_back(mood_series(u, data.mood_index));
  return naive_class_accuracy(all);
}

// ---- stages -------------------------------------------------------------

void emit_preprocess(const PipelineConfig& config, const PreparedData& data, OutputSet& out) {
  std::ostringstream wide, flags, examples, mood;
  write_wide_csv(wide, data.filled);
  write_imputation_flags_csv(flags, data.filled);
  write_examples_csv(examples, data.classification);
  mood << "id,time,mood\n";
  for (const auto& r : data.records)
    if (r.variable == kMoodVariable && r.value) mood << r.user_id << ',' << r.time.iso() << ',' << format_number(*r.value) << '\n';
  out["tables/daily_wide.csv"] = wide.str();
  out["tables/imputation_flags.csv"] = flags.str();
  out["tables/svm_examples.csv"] = examples.str();
  out["plots/daily_mood.csv"] = mood.str();

  const auto coverage = variable_coverage(data.daily);
  ojson cov = ojson::object();
  for (std::size_t v = 0; v < data.daily.variables.size(); ++v) cov[data.daily.variables[v]] = coverage[v];
  ojson observations = ojson::object();
  std::size_t imputed = 0;
  for (const auto& u : data.filled.users) {
    observations[u.user_id] = u.days.size();
    for (const auto& d : u.days)
      for (const auto& c : d.cells)
        if (c && c->imputed()) ++imputed;
  }
  ojson summary;
  summary["schema"] = "moodcast.preprocess_summary";
  summary["version"] = 1;
  summary["prune"] = {{"min_variable_coverage", config.prune.min_variable_coverage},
                      {"min_day_coverage", config.prune.min_day_coverage},
                      {"require_mood", config.prune.require_mood}};
  summary["variable_coverage"] = cov;
  summary["retained_variables"] = data.retained_variables;
  summary["dropped_users"] = data.dropped_users;
  summary["observations_per_user"] = observations;
  summary["imputed_cells"] = imputed;
  summary["clamped_scaled_values"] = data.sequences.clamped;
  summary["classification_examples"] = data.classification.examples.size();
  summary["feature_names"] = data.classification.feature_names;
  out["reports/preprocess.json"] = dump(summary);
}

SvmModel train_svm_stage(const PipelineConfig& config, const SvmStage& stage, OutputSet& out) {
  SvmModel model = train_multiclass(stage.split.train, config.svm, config.execution);
  out["models/svm.json"] = dump(to_json(model));
  return model;
}

std::vector<RnnModel> train_rnn_stage(const PipelineConfig& config, const PreparedData& data,
                                      const std::vector<RnnUserData>& users, OutputSet& out) {
  RnnConfig rc = config.rnn;
  rc.seed = config.effective_rnn_seed();
  std::vector<UserTrainingJob> jobs;
  for (const auto& u : users) jobs.push_back({u.user_id, u.split.train});
  auto trained = train_users(jobs, rc, data.scaling, config.execution);

  ojson doc;
  doc["schema"] = "moodcast.rnn_models";
  doc["version"] = 1;
  doc["config"] = to_json(rc);
  auto& arr = doc["users"] = ojson::array();
  std::ostringstream traces;
  traces << "id,epoch,mse\n";
  std::vector<RnnModel> models;
  for (auto& t : trained) {
    arr.push_back(to_json(t.model));
    for (std::size_t e = 0; e < t.trace.mse.size(); ++e)
      traces << t.model.user_id << ',' << e + 1 << ',' << format_number(t.trace.mse[e]) << '\n';
    models.push_back(std::move(t.model));
  }
  out["models/rnn.json"] = dump(doc);
  out["plots/rnn_traces.csv"] = traces.str();
  return models;
}

void emit_baseline(const PreparedData& data, const std::vector<RnnUserData>& users, OutputSet& out,
                   std::vector<std::string>& warnings) {
  std::ostringstream csv;
  series_csv_header(csv);
  ojson full = ojson::object();
  for (const auto& u : data.filled.users) {
    const auto series = mood_series(u, data.mood_index);
    const auto preds = predict_naive(u.user_id, series);
    if (preds.empty()) {
      warnings.push_back("baseline: user " + u.user_id + " has fewer than 2 days; no persistence predictions");
      continue;
    }
    std::vector<double> a, p;
    for (const auto& x : preds) {
      a.push_back(x.actual);
      p.push_back(x.predicted);
      series_csv_row(csv, {x.user_id, x.target_date, x.actual, x.predicted}, "naive");
    }
    full[u.user_id] = rmse(a, p);
  }
  ojson test = ojson::object();
  for (const auto& u : users) test[u.user_id] = series_rmse(naive_on_targets(data, u));

  ojson doc;
  doc["schema"] = "moodcast.baseline";
  doc["version"] = 1;
  doc["benchmark_accuracy"] = benchmark_accuracy(data);
  doc["rmse_on_rnn_test_targets"] = test;
  doc["rmse_full_series"] = full;
  out["reports/baseline.json"] = dump(doc);
  out["plots/naive_predictions.csv"] = csv.str();
}

void emit_evaluation(const PipelineConfig& config, const PreparedData& data, const SvmStage& svm_stage,
                     const SvmModel& svm, const std::vector<RnnUserData>& users, const std::vector<RnnModel>& rnn,
                     OutputSet& out) {
  ReportInputs in;

  auto classify = [&](const std::vector<ClassificationExample>& set) {
    std::vector<int> actual, predicted;
    for (const auto& ex : set) {
      actual.push_back(ex.target_class);
      predicted.push_back(predict_svm(svm, ex.features));
    }
    return confusion_matrix(actual, predicted);
  };
  in.svm = ClassifierResults{classify(svm_stage.split.train), classify(svm_stage.split.test)};

  std::map<std::string, const RnnModel*> by_user;
  for (const auto& m : rnn) by_user[m.user_id] = &m;
  std::map<std::string, double> rnn_rmse, naive_rmse;
  std::ostringstream csv;
  series_csv_header(csv);
  for (const auto& u : users) {
    auto it = by_user.find(u.user_id);
    if (it == by_user.end()) throw Error("evaluate: models/rnn.json has no model for user " + u.user_id);
    const auto preds = predict_rnn_user(data, u, *it->second);
    const auto naive = naive_on_targets(data, u);
    rnn_rmse[u.user_id] = series_rmse(preds.test);
    naive_rmse[u.user_id] = series_rmse(naive);
    for (const auto& p : preds.fit) series_csv_row(csv, p, "rnn_fit");
    for (const auto& p : preds.test) series_csv_row(csv, p, "rnn");
    for (const auto& p : naive) series_csv_row(csv, p, "naive");
  }
  in.rnn_rmse = std::move(rnn_rmse);
  in.naive_rmse = std::move(naive_rmse);
  in.benchmark_accuracy = benchmark_accuracy(data);

  ojson seeds = {{"global", config.seed},
                 {"synth", config.effective_synth_seed()},
                 {"split", config.effective_split_seed()},
                 {"rnn", config.effective_rnn_seed()}};
  in.provenance = {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                   {"seeds", seeds},
                   {"input_fingerprint", fingerprint(data.raw_csv)},
                   {"config_fingerprint", fingerprint(to_json(config).dump())},
                   {"retained_variables", data.retained_variables},
                   {"svm_features", data.classification.feature_names},
                   {"svm_examples", {{"train", svm_stage.split.train.size()}, {"test", svm_stage.split.test.size()}}},
                   {"rnn_users", users.size()},
                   {"dropped_users", data.dropped_users}};

  const EvaluationReport report = build_report(std::move(in));
  out["reports/report.json"] = dump(to_json(report));
  out["reports/report.txt"] = render_text(report);
  out["plots/predictions.csv"] = csv.str();
}

SvmModel load_svm(const PipelineConfig& config) {
  const auto path = (fs::path(config.output_dir) / "models" / "svm.json").string();
  if (!fs::exists(path)) throw Error("evaluate: missing artifact models/svm.json in " + config.output_dir + " (run train-svm first)");
  return svm_model_from_json(nlohmann::json::parse(read_file(path, "evaluate")));
}

std::vector<RnnModel> rnn_models_from_text(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (doc.value("schema", "") != "moodcast.rnn_models") throw Error("evaluate: models/rnn.json is not an RNN model set");
  std::vector<RnnModel> models;
  for (const auto& m : doc.at("users")) models.push_back(rnn_model_from_json(m));
  return models;
}

std::vector<RnnModel> load_rnn(const PipelineConfig& config) {
  const auto path = (fs::path(config.output_dir) / "models" / "rnn.json").string();
  if (!fs::exists(path)) throw Error("evaluate: missing artifact models/rnn.json in " + config.output_dir + " (run train-rnn first)");
  return rnn_models_from_text(read_file(path, "evaluate"));
}

ojson manifest(const std::string& command, const PipelineConfig& config, const PreparedData* data,
               const std::string& raw_csv, std::size_t n_records, const std::vector<std::string>& warnings,
               const OutputSet& outputs) {
  ojson m;
  m["schema"] = "moodcast.manifest";
  m["version"] = 1;
  m["tool"] = {{"name", kToolName}, {"version", kToolVersion}, {"config_schema", kConfigSchemaVersion}};
  m["command"] = command;
  m["config"] = to_json(config);
  m["derived_seeds"] = {{"synth", config.effective_synth_seed()},
                        {"split", config.effective_split_seed()},
                        {"rnn", config.effective_rnn_seed()},
                        {"rnn-init", derive_seed(config.effective_rnn_seed(), "rnn-init")},
                        {"rnn-shuffle", derive_seed(config.effective_rnn_seed(), "rnn-shuffle")}};
  ojson input = {{"source", config.input_path ? "file" : "synth"}};
  if (config.input_path) input["path"] = *config.input_path;
  input["fingerprint"] = fingerprint(raw_csv);
  input["records"] = n_records;
  if (data) input["skipped_rows"] = data->skipped_rows;
  m["input"] = input;
  m["warnings"] = warnings;
  auto& files = m["outputs"] = ojson::array();
  for (const auto& [path, bytes] : outputs) files.push_back({{"path", path}, {"fingerprint", fingerprint(bytes)}});
  return m;
}

SynthConfig effective_synth(const PipelineConfig& config) {
  SynthConfig sc = config.synth.value_or(SynthConfig{});
  sc.seed = config.effective_synth_seed();
  return sc;
}

}  // namespace

// ---- config ----------------------------------------------------------------

void PipelineConfig::validate() const {
  prune.validate();
  svm_split.validate();
  svm.validate();
  rnn.validate();
  if (window == 0) throw Error("config: window must be positive");
  if (synth) synth->validate();
}

std::uint64_t PipelineConfig::effective_synth_seed() const { return synth_seed.value_or(derive_seed(seed, "synth")); }
std::uint64_t PipelineConfig::effective_split_seed() const { return split_seed.value_or(derive_seed(seed, "split")); }
std::uint64_t PipelineConfig::effective_rnn_seed() const { return rnn_seed.value_or(seed); }

PipelineConfig config_from_json(const nlohmann::json& doc) {
  const nlohmann::json& j = doc.value("schema", "") == "moodcast.manifest" ? doc.at("config") : doc;
  if (!j.is_object()) throw Error("config: expected a JSON object");
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != kConfigSchemaVersion)
    throw Error("config: unsupported schema_version " + j.at("schema_version").dump());

  PipelineConfig c;
  try {
    if (j.contains("input") && !j.at("input").is_null()) c.input_path = j.at("input").get<std::string>();
    if (j.contains("synth") && !j.at("synth").is_null()) {
      c.synth = synth_config_from_json(j.at("synth"));
      if (j.at("synth").contains("seed")) c.synth_seed = j.at("synth").at("seed").get<std::uint64_t>();
    }
    if (j.contains("parse_mode")) {
      const auto m = j.at("parse_mode").get<std::string>();
      if (m != "strict" && m != "lenient") throw Error("config: parse_mode must be strict or lenient");
      c.parse_mode = m == "strict" ? ParseMode::strict : ParseMode::lenient;
    }
    if (j.contains("prune")) {
      const auto& p = j.at("prune");
      c.prune.min_variable_coverage = p.value("min_variable_coverage", c.prune.min_variable_coverage);
      c.prune.min_day_coverage = p.value("min_day_coverage", c.prune.min_day_coverage);
      c.prune.require_mood = p.value("require_mood", c.prune.require_mood);
    }
    c.window = j.value("window", c.window);
    if (j.contains("svm_split")) {
      const auto& s = j.at("svm_split");
      c.svm_split.test_fraction = s.value("test_fraction", c.svm_split.test_fraction);
      if (s.contains("mode")) c.svm_split.mode = parse_mode_name(s.at("mode"));
      if (s.contains("seed")) c.split_seed = s.at("seed").get<std::uint64_t>();
    }
    if (j.contains("rnn_split_mode")) c.rnn_split_mode = parse_mode_name(j.at("rnn_split_mode"));
    if (j.contains("svm")) c.svm = svm_params_from_json(j.at("svm"));
    if (j.contains("rnn")) {
      c.rnn = rnn_config_from_json(j.at("rnn"));
      if (j.at("rnn").contains("seed")) c.rnn_seed = j.at("rnn").at("seed").get<std::uint64_t>();
    }
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    c.seed = j.value("seed", c.seed);
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      auto pick = [&](const char* key, std::optional<std::uint64_t>& slot) {
        if (s.contains(key) && !s.at(key).is_null()) slot = s.at(key).get<std::uint64_t>();
      };
      pick("synth", c.synth_seed);
      pick("split", c.split_seed);
      pick("rnn", c.rnn_seed);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::ordered_json to_json(const PipelineConfig& c) {
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? ojson(*v) : ojson(nullptr); };
  ojson j;
  j["schema_version"] = kConfigSchemaVersion;
  j["input"] = c.input_path ? ojson(*c.input_path) : ojson(nullptr);
  if (c.synth) {
    j["synth"] = to_json(*c.synth);
    j["synth"].erase("seed");
  } else {
    j["synth"] = nullptr;
  }
  j["parse_mode"] = c.parse_mode == ParseMode::strict ? "strict" : "lenient";
  j["prune"] = {{"min_variable_coverage", c.prune.min_variable_coverage},
                {"min_day_coverage", c.prune.min_day_coverage},
                {"require_mood", c.prune.require_mood}};
  j["window"] = c.window;
  j["svm_split"] = {{"test_fraction", c.svm_split.test_fraction}, {"mode", mode_name(c.svm_split.mode)}};
  j["rnn_split_mode"] = mode_name(c.rnn_split_mode);
  j["svm"] = to_json(c.svm);
  j["rnn"] = to_json(c.rnn);
  j["rnn"].erase("seed");
  j["seed"] = c.seed;
  j["seeds"] = {{"synth", opt(c.synth_seed)}, {"split", opt(c.split_seed)}, {"rnn", opt(c.rnn_seed)}};
  return j;
}

// ---- data preparation -------------------------------------------------------

PreparedData prepare(const PipelineConfig& config) {
  config.validate();
  PreparedData d;
  if (config.input_path) {
    d.source = "file";
    d.raw_csv = read_file(*config.input_path, "input");
  } else {
    d.source = "synth";
    d.synthetic = generate_dataset(effective_synth(config));
    std::ostringstream csv;
    write_records_csv(csv, d.synthetic->records);
    d.raw_csv = csv.str();
  }
  auto parsed = parse_records(d.raw_csv, config.parse_mode);
  d.records = std::move(parsed.records);
  d.skipped_rows = parsed.skipped;
  if (parsed.skipped > 0) d.warnings.push_back("ingest: skipped " + std::to_string(parsed.skipped) + " malformed row(s)");

  d.daily = pivot_daily(d.records);
  auto pruned = prune_days(prune_variables(d.daily, config.prune), config.prune);
  d.dropped_users = pruned.dropped_users;
  for (const auto& u : d.dropped_users) d.warnings.push_back("preprocess: user " + u + " has no usable days; removed");
  if (pruned.table.users.empty()) throw Error("preprocess: no user has any usable day after pruning");
  d.filled = forward_fill(pruned.table);
  d.retained_variables = d.filled.variables;
  d.mood_index = *d.filled.variable_index(kMoodVariable);
  d.scaling = fit_scaling(d.filled, d.retained_variables);
  d.classification = build_classification_examples(d.filled, config.window);
  d.sequences = build_sequence_examples(d.filled, d.scaling, config.rnn.seq_len);
  for (const auto& w : d.classification.warnings) d.warnings.push_back("features: " + w);
  for (const auto& w : d.sequences.warnings) d.warnings.push_back("features: " + w);
  return d;
}

SvmStage split_for_svm(const PipelineConfig& config, const PreparedData& data) {
  SplitSpec spec = config.svm_split;
  spec.seed = config.effective_split_seed();
  return {split_holdout<ClassificationExample>(data.classification.examples, spec)};
}

std::vector<RnnUserData> split_for_rnn(const PipelineConfig& config, const PreparedData& data,
                                       std::vector<std::string>& warnings) {
  std::vector<RnnUserData> out;
  for (const auto& u : data.sequences.users) {
    if (u.examples.size() < 2) {
      if (!u.examples.empty())
        warnings.push_back("rnn: user " + u.user_id + " has a single sequence example; cannot hold out a test set");
      continue;
    }
    SplitSpec spec{config.rnn.test_fraction, config.rnn_split_mode, derive_seed(config.effective_split_seed(), u.user_id)};
    out.push_back({u.user_id, split_holdout<SequenceExample>(u.examples, spec)});
  }
  if (out.empty()) throw Error("rnn: no user has enough sequence examples to train and test");
  return out;
}

std::vector<SeriesPoint> naive_on_targets(const PreparedData& data, const RnnUserData& user) {
  const UserSeries& series = find_user(data.filled, user.user_id);
  std::vector<SeriesPoint> out;
  for (const auto& ex : user.split.test) {
    std::size_t pos = 0;
    const double actual = mood_on(series, data.mood_index, ex.target_date, &pos);
    if (pos == 0) throw Error("internal: target day without predecessor for " + user.user_id);
    out.push_back({user.user_id, ex.target_date, actual, series.days[pos - 1].cells[data.mood_index]->mean});
  }
  return out;
}

// ---- commands ---------------------------------------------------------------

OutputSet execute(const std::string& command, const PipelineConfig& config, std::vector<std::string>& warnings) {
  static const std::vector<std::string> kCommands = {"synth",    "preprocess", "train-svm", "train-rnn",
                                                     "baseline", "evaluate",   "all"};
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw Error("unknown command '" + command + "'");
  config.validate();
  OutputSet out;

  if (command == "synth") {
    if (config.input_path) throw Error("synth: an input file is configured; synth generates its own data");
    const SynthConfig sc = effective_synth(config);
    const auto data = generate_dataset(sc);
    std::ostringstream csv;
    write_records_csv(csv, data.records);
    out["tables/raw.csv"] = csv.str();
    out["tables/ground_truth.json"] = dump(ground_truth_json(sc, data));
    out["manifest.json"] = dump(manifest(command, config, nullptr, out["tables/raw.csv"], data.records.size(), warnings, out));
    return out;
  }

  const PreparedData data = prepare(config);
  warnings.insert(warnings.end(), data.warnings.begin(), data.warnings.end());
  const bool all = command == "all";

  if (all && data.synthetic) {
    out["tables/raw.csv"] = data.raw_csv;
    out["tables/ground_truth.json"] = dump(ground_truth_json(effective_synth(config), *data.synthetic));
  }
  if (all || command == "preprocess") emit_preprocess(config, data, out);

  std::optional<SvmStage> svm_stage;
  std::optional<SvmModel> svm;
  if (all || command == "train-svm" || command == "evaluate") svm_stage = split_for_svm(config, data);
  if (all || command == "train-svm") svm = train_svm_stage(config, *svm_stage, out);

  std::vector<RnnUserData> rnn_users;
  if (all || command == "train-rnn" || command == "baseline" || command == "evaluate")
    rnn_users = split_for_rnn(config, data, warnings);
  std::vector<RnnModel> rnn;
  if (all || command == "train-rnn") rnn = train_rnn_stage(config, data, rnn_users, out);

  if (all || command == "baseline") emit_baseline(data, rnn_users, out, warnings);

  if (all || command == "evaluate") {
    if (!all) {
      svm = load_svm(config);
      rnn = load_rnn(config);
    } else {
      // evaluate exactly what a standalone evaluate would read back
      svm = svm_model_from_json(nlohmann::json::parse(out.at("models/svm.json")));
      rnn = rnn_models_from_text(out.at("models/rnn.json"));
    }
    emit_evaluation(config, data, *svm_stage, *svm, rnn_users, rnn, out);
  }

  out["manifest.json"] = dump(manifest(command, config, &data, data.raw_csv, data.records.size(), warnings, out));
  return out;
}

void write_outputs(const std::string& dir, const OutputSet& outputs) {
  for (const auto& [rel, bytes] : outputs) {
    const fs::path path = fs::path(dir) / rel;
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("failed writing '" + path.string() + "'");
  }
}

int run(const std::string& command, const PipelineConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> warnings;
    const OutputSet outputs = execute(command, config, warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    write_outputs(config.output_dir, outputs);
    out << kToolName << ' ' << command << ": wrote " << outputs.size() << " file(s) to " << config.output_dir << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << kToolName << ' ' << command << ": error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace moodcast
