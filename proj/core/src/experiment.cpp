#include "histeps/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "histeps/error.hpp"
#include "histeps/idx.hpp"
#include "histeps/mlp.hpp"
#include "histeps/random.hpp"

namespace histeps {

namespace {

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-')) c = '_';
  }
  return out;
}

std::string histogram_file_name(const CaptureRecord& c) {
  return "hist/" + sanitize(c.variable) + "_iter" + std::to_string(c.iteration) + ".csv";
}

}  // namespace

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
  try {
    hp.validate();
  } catch (const ContractError& e) {
    throw ConfigError(std::string("optimizer: ") + e.what());
  }
  if (epochs == 0) throw ConfigError("epochs must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (hidden.empty()) throw ConfigError("model needs at least one hidden layer");
  for (auto w : hidden) {
    if (w == 0) throw ConfigError("hidden widths must be positive");
  }
  if (capture.every_k > 0 && !is_adaptive(rule)) {
    throw ConfigError("histogram capture needs an adaptive rule; " + std::string(to_string(rule)) + " has no proxy");
  }
  if (dataset.kind == DatasetConfig::Kind::idx && (dataset.train_images.empty() || dataset.train_labels.empty())) {
    throw ConfigError("idx dataset needs train_images and train_labels");
  }
}

json to_json(const HyperParams& hp) {
  return json{{"lr", hp.lr},
              {"eps", hp.eps},
              {"beta1", hp.beta1},
              {"beta2", hp.beta2},
              {"beta3", hp.beta3},
              {"momentum", hp.momentum},
              {"dampening", hp.dampening},
              {"weight_decay", hp.weight_decay}};
}

HyperParams hyperparams_from_json(const json& j, Rule rule) {
  HyperParams hp = HyperParams::defaults(rule);
  hp.lr = get_or(j, "lr", hp.lr);
  hp.eps = get_or(j, "eps", hp.eps);
  hp.beta1 = get_or(j, "beta1", hp.beta1);
  hp.beta2 = get_or(j, "beta2", hp.beta2);
  hp.beta3 = get_or(j, "beta3", hp.beta3);
  hp.momentum = get_or(j, "momentum", hp.momentum);
  hp.dampening = get_or(j, "dampening", hp.dampening);
  hp.weight_decay = get_or(j, "weight_decay", hp.weight_decay);
  return hp;
}

json to_json(const RunConfig& c) {
  json ds;
  if (c.dataset.kind == DatasetConfig::Kind::blobs) {
    ds = json{{"kind", "blobs"},
              {"n", c.dataset.blobs.n},
              {"classes", c.dataset.blobs.classes},
              {"dim", c.dataset.blobs.dim},
              {"spread", c.dataset.blobs.spread},
              {"seed", c.dataset.blobs.seed},
              {"test_n", c.dataset.test_n},
              {"normalize", c.dataset.normalize}};
  } else {
    ds = json{{"kind", "idx"},
              {"train_images", c.dataset.train_images},
              {"train_labels", c.dataset.train_labels},
              {"test_images", c.dataset.test_images},
              {"test_labels", c.dataset.test_labels},
              {"limit", c.dataset.limit},
              {"test_limit", c.dataset.test_limit}};
  }
  json opt = to_json(c.hp);
  opt["rule"] = std::string(to_string(c.rule));
  json capture{{"every_k", c.capture.every_k},
               {"log10_lo", c.capture.range.log10_lo},
               {"log10_hi", c.capture.range.log10_hi},
               {"bins", c.capture.range.bins}};
  capture["eps"] = c.capture.eps ? json(*c.capture.eps) : json(nullptr);
  return json{{"dataset", ds},
              {"model", {{"hidden", c.hidden}, {"seed", c.model_seed}}},
              {"optimizer", opt},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"drop_last", c.drop_last},
              {"seed", c.seed},
              {"capture", capture},
              {"output_dir", c.output_dir}};
}

RunConfig run_config_from_json(const json& j) {
  try {
    RunConfig c;
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      const std::string kind = get_or<std::string>(d, "kind", "blobs");
      if (kind == "blobs") {
        c.dataset.kind = DatasetConfig::Kind::blobs;
        c.dataset.blobs.n = get_or(d, "n", c.dataset.blobs.n);
        c.dataset.blobs.classes = get_or(d, "classes", c.dataset.blobs.classes);
        c.dataset.blobs.dim = get_or(d, "dim", c.dataset.blobs.dim);
        c.dataset.blobs.spread = get_or(d, "spread", c.dataset.blobs.spread);
        c.dataset.blobs.seed = get_or(d, "seed", c.dataset.blobs.seed);
        c.dataset.test_n = get_or(d, "test_n", c.dataset.test_n);
        c.dataset.normalize = get_or(d, "normalize", c.dataset.normalize);
      } else if (kind == "idx") {
        c.dataset.kind = DatasetConfig::Kind::idx;
        c.dataset.train_images = get_or<std::string>(d, "train_images", "");
        c.dataset.train_labels = get_or<std::string>(d, "train_labels", "");
        c.dataset.test_images = get_or<std::string>(d, "test_images", "");
        c.dataset.test_labels = get_or<std::string>(d, "test_labels", "");
        c.dataset.limit = get_or(d, "limit", c.dataset.limit);
        c.dataset.test_limit = get_or(d, "test_limit", c.dataset.test_limit);
      } else {
        throw ConfigError("unknown dataset kind '" + kind + "'");
      }
    }
    if (j.contains("model")) {
      const json& m = j.at("model");
      c.hidden = get_or(m, "hidden", c.hidden);
      c.model_seed = get_or(m, "seed", c.model_seed);
    }
    if (j.contains("optimizer")) {
      const json& o = j.at("optimizer");
      c.rule = parse_rule(get_or<std::string>(o, "rule", "adam"));
      c.hp = hyperparams_from_json(o, c.rule);
    }
    c.epochs = get_or(j, "epochs", c.epochs);
    c.batch_size = get_or(j, "batch_size", c.batch_size);
    c.drop_last = get_or(j, "drop_last", c.drop_last);
    c.seed = get_or(j, "seed", c.seed);
    if (j.contains("capture")) {
      const json& cap = j.at("capture");
      c.capture.every_k = get_or(cap, "every_k", c.capture.every_k);
      if (cap.contains("eps") && !cap.at("eps").is_null()) c.capture.eps = cap.at("eps").get<double>();
      c.capture.range.log10_lo = get_or(cap, "log10_lo", c.capture.range.log10_lo);
      c.capture.range.log10_hi = get_or(cap, "log10_hi", c.capture.range.log10_hi);
      c.capture.range.bins = get_or(cap, "bins", c.capture.range.bins);
    }
    c.output_dir = get_or<std::string>(j, "output_dir", "");
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  } catch (const ContractError& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return run_config_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

LoadedData load_data(const DatasetConfig& config) {
  LoadedData out;
  if (config.kind == DatasetConfig::Kind::blobs) {
    out.train = gen_blobs(config.blobs);
    if (config.test_n > 0) {
      BlobSpec test_spec = config.blobs;
      test_spec.n = config.test_n;
      test_spec.seed = mix_seed(config.blobs.seed, 0x7e57);
      out.test = gen_blobs(test_spec);
    }
    if (config.normalize) {
      const auto scaler = FeatureScaler::fit(out.train);
      scaler.apply(out.train);
      if (out.test) scaler.apply(*out.test);
    }
  } else {
    out.train = load_idx(config.train_images, config.train_labels, config.limit);
    if (!config.test_images.empty()) {
      out.test = load_idx(config.test_images, config.test_labels, config.test_limit);
      const std::size_t classes = std::max(out.train.class_count, out.test->class_count);
      out.train.class_count = classes;
      out.test->class_count = classes;
    }
  }
  out.train.validate();
  return out;
}

// ---------------------------------------------------------------- training

std::string RunRecord::metric_name() const {
  return !epochs.empty() && epochs.front().test_accuracy ? "test_accuracy" : "train_accuracy";
}

double RunRecord::metric(const EpochMetrics& e) const {
  return e.test_accuracy ? *e.test_accuracy : e.train_accuracy;
}

double RunRecord::best_metric() const {
  if (epochs.empty()) throw ContractError("run record has no epochs");
  return metric(epochs.at(best_epoch() - 1));
}

std::size_t RunRecord::best_epoch() const {
  if (epochs.empty()) throw ContractError("run record has no epochs");
  std::size_t best = 0;
  for (std::size_t i = 1; i < epochs.size(); ++i) {
    if (metric(epochs[i]) > metric(epochs[best])) best = i;
  }
  return epochs[best].epoch;
}

std::vector<CaptureRecord> capture_records(std::span<const ZhatSnapshot> snapshots, double eps,
                                           const HistogramRange& range) {
  std::vector<CaptureRecord> out;
  out.reserve(snapshots.size());
  for (const auto& snap : snapshots) {
    out.push_back(CaptureRecord{.iteration = snap.iteration,
                                .epoch = snap.epoch,
                                .variable = snap.variable,
                                .eps = eps,
                                .fraction_above = fraction_above(snap.values, eps),
                                .histogram = build_histogram(snap.values, range)});
  }
  return out;
}

RunRecord run_training(const RunConfig& config, const LoadedData& data, const CaptureCallback& on_capture) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::size_t> widths{data.train.dim()};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(data.train.class_count);
  Mlp model(MlpSpec{widths, config.model_seed});

  auto& params = model.parameters();
  OptimizerState state = init_state(config.rule, params, config.hp, model.parameter_names());
  const BatchPlan plan = config.batch_plan();
  const double capture_eps = config.capture.eps.value_or(config.hp.eps);

  RunRecord record;
  record.config = config;
  record.iterations_per_epoch = batches_per_epoch(data.train.size(), plan);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& idx : batches(data.train.size(), plan, epoch)) {
      const std::int64_t iteration = state.t + 1;
      LossAndGradients lg;
      try {
        lg = model.loss_and_gradients(data.train.gather_features(idx), data.train.gather_labels(idx));
      } catch (const NumericError& e) {
        throw NumericError("iteration " + std::to_string(iteration) + " (epoch " + std::to_string(epoch + 1) +
                           "): " + e.what());
      }
      if (!std::isfinite(lg.loss)) {
        throw NumericError("non-finite loss at iteration " + std::to_string(iteration));
      }
      step(state, params, lg.gradients);

      if (config.capture.every_k > 0 && state.t % static_cast<std::int64_t>(config.capture.every_k) == 0) {
        const auto snaps = zhat(state, static_cast<std::int64_t>(epoch + 1));
        if (on_capture) on_capture(snaps);
        auto recs = capture_records(snaps, capture_eps, config.capture.range);
        record.captures.insert(record.captures.end(), std::make_move_iterator(recs.begin()),
                               std::make_move_iterator(recs.end()));
      }
    }
    EpochMetrics m;
    m.epoch = epoch + 1;
    const Evaluation tr = model.evaluate(data.train);
    m.train_loss = tr.loss;
    m.train_accuracy = tr.accuracy;
    if (data.test) {
      const Evaluation te = model.evaluate(*data.test);
      m.test_loss = te.loss;
      m.test_accuracy = te.accuracy;
    }
    record.epochs.push_back(m);
  }
  record.params_digest = model.digest();
  record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

RunRecord run_training(const RunConfig& config) { return run_training(config, load_data(config.dataset)); }

json to_json(const RunRecord& r) {
  json epochs = json::array();
  for (const auto& e : r.epochs) {
    json je{{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"train_accuracy", e.train_accuracy}};
    je["test_loss"] = e.test_loss ? json(*e.test_loss) : json(nullptr);
    je["test_accuracy"] = e.test_accuracy ? json(*e.test_accuracy) : json(nullptr);
    epochs.push_back(je);
  }
  json captures = json::array();
  for (const auto& c : r.captures) {
    captures.push_back(json{{"iteration", c.iteration},
                            {"epoch", c.epoch},
                            {"variable", c.variable},
                            {"eps", c.eps},
                            {"fraction_above", c.fraction_above},
                            {"file", histogram_file_name(c)}});
  }
  json out{{"config", to_json(r.config)},
           {"iterations_per_epoch", r.iterations_per_epoch},
           {"epochs", epochs},
           {"final_params_digest", r.params_digest},
           {"captures", captures}};
  if (!r.epochs.empty()) {
    out["metric"] = r.metric_name();
    out["best_metric"] = r.best_metric();
    out["best_epoch"] = r.best_epoch();
  }
  return out;
}

// ---------------------------------------------------------------- grid

std::size_t GridResult::failures() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const GridCell& c) { return !c.ok(); }));
}

std::optional<std::size_t> GridResult::argmax() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].ok()) continue;
    if (!best || cells[i].best_metric > cells[*best].best_metric) best = i;
  }
  return best;
}

GridResult run_grid(const RunConfig& base, const GridAxes& axes, const LoadedData& data, const GridOptions& options) {
  if (axes.alphas.empty() || axes.epsilons.empty() || axes.beta2s.empty()) {
    throw ContractError("grid axes must be non-empty");
  }
  GridResult result;
  result.axes = axes;
  result.metric = data.test ? "test_accuracy" : "train_accuracy";
  for (double a : axes.alphas)
    for (double e : axes.epsilons)
      for (double b : axes.beta2s) result.cells.push_back(GridCell{.alpha = a, .epsilon = e, .beta2 = b, .best_metric = 0.0, .best_epoch = -1, .error = {}});

  std::vector<std::size_t> order = options.execution_order;
  if (order.empty()) {
    order.resize(result.cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  }
  if (order.size() != result.cells.size()) throw ContractError("grid execution order must cover every cell");

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= order.size()) return;
      GridCell& cell = result.cells.at(order[slot]);
      RunConfig cfg = base;
      cfg.hp.lr = cell.alpha;
      cfg.hp.eps = cell.epsilon;
      cfg.hp.beta2 = cell.beta2;
      cfg.capture.every_k = 0;
      try {
        const RunRecord rec = run_training(cfg, data);
        cell.best_metric = rec.best_metric();
        cell.best_epoch = static_cast<std::int64_t>(rec.best_epoch());
      } catch (const std::exception& e) {
        cell.error = e.what();
        cell.best_metric = std::nan("");
        cell.best_epoch = -1;
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, result.cells.size());
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return result;
}

void write_grid_csv(std::ostream& out, const GridResult& grid) {
  out << "alpha,epsilon,beta2,best_metric,best_epoch\n";
  for (const auto& c : grid.cells) {
    out << shortest(c.alpha) << ',' << shortest(c.epsilon) << ',' << shortest(c.beta2) << ','
        << shortest(c.best_metric) << ',' << c.best_epoch << "\n";
  }
}

GridResult read_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "alpha,epsilon,beta2,best_metric,best_epoch") {
    throw FormatError("heatmap CSV: unexpected header");
  }
  GridResult g;
  auto note = [](std::vector<double>& axis, double v) {
    if (std::find(axis.begin(), axis.end(), v) == axis.end()) axis.push_back(v);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 5) throw FormatError("heatmap CSV: expected 5 fields in '" + line + "'");
    GridCell c;
    char* end = nullptr;
    double* targets[] = {&c.alpha, &c.epsilon, &c.beta2, &c.best_metric};
    for (int i = 0; i < 4; ++i) {
      *targets[i] = std::strtod(fields[i].c_str(), &end);
      if (end == fields[i].c_str()) throw FormatError("heatmap CSV: bad number '" + fields[i] + "'");
    }
    c.best_epoch = std::stoll(fields[4]);
    if (c.best_epoch < 0) c.error = "failed";
    note(g.axes.alphas, c.alpha);
    note(g.axes.epsilons, c.epsilon);
    note(g.axes.beta2s, c.beta2);
    g.cells.push_back(c);
  }
  return g;
}

json to_json(const GridResult& grid) {
  json cells = json::array();
  for (const auto& c : grid.cells) {
    json jc{{"alpha", c.alpha}, {"epsilon", c.epsilon}, {"beta2", c.beta2}, {"best_epoch", c.best_epoch}};
    jc["best_metric"] = c.ok() ? json(c.best_metric) : json(nullptr);
    if (!c.ok()) jc["error"] = c.error;
    cells.push_back(jc);
  }
  json out{{"axes", {{"alpha", grid.axes.alphas}, {"epsilon", grid.axes.epsilons}, {"beta2", grid.axes.beta2s}}},
           {"metric", grid.metric},
           {"cells", cells},
           {"failures", grid.failures()}};
  if (auto best = grid.argmax()) out["best_cell"] = *best;
  return out;
}

// ---------------------------------------------------------------- snapshots & reports

std::vector<ZhatSnapshot> read_snapshots(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot file " + path.string());
  try {
    const json j = json::parse(in);
    std::vector<ZhatSnapshot> out;
    std::size_t k = 0;
    for (const auto& s : j.at("snapshots")) {
      ZhatSnapshot snap;
      snap.variable = get_or<std::string>(s, "variable", "var" + std::to_string(k));
      snap.variable_index = k++;
      snap.values = s.at("values").get<std::vector<double>>();
      snap.iteration = get_or<std::int64_t>(s, "iteration", 0);
      snap.epoch = get_or<std::int64_t>(s, "epoch", 0);
      for (double v : snap.values) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw FormatError("snapshot " + snap.variable + " holds a negative or non-finite value");
      }
      out.push_back(std::move(snap));
    }
    if (out.empty()) throw FormatError("snapshot file holds no snapshots");
    return out;
  } catch (const json::exception& e) {
    throw FormatError("snapshot file " + path.string() + ": " + e.what());
  }
}

void write_snapshots(const std::filesystem::path& path, std::span<const ZhatSnapshot> snapshots) {
  json arr = json::array();
  for (const auto& s : snapshots) {
    arr.push_back(json{{"variable", s.variable}, {"values", s.values}, {"iteration", s.iteration}, {"epoch", s.epoch}});
  }
  write_text_file(path, json{{"snapshots", arr}}.dump() + "\n");
}

namespace {

json regime_json(const RegimeReport& r) {
  json per = json::object();
  for (const auto& [name, frac] : r.per_variable) per[name] = frac;
  return json{{"eps", r.eps},
              {"overall_fraction", r.overall_fraction},
              {"regime", to_string(r.regime)},
              {"per_variable", per},
              {"thresholds", {{"immutable_at_most", r.thresholds.immutable_at_most},
                              {"adaptive_at_least", r.thresholds.adaptive_at_least}}}};
}

}  // namespace

json estimation_report(const EpsilonRange& range, std::span<const ZhatSnapshot> snapshots) {
  json per = json::array();
  for (const auto& v : range.per_variable) per.push_back(json{{"variable", v.variable}, {"p2", v.p2}, {"p98", v.p98}});
  json out{{"rule", std::string(to_string(range.probe.rule))},
           {"probe_hyperparameters", to_json(range.probe.hp)},
           {"iterations_per_epoch", range.probe.iterations_per_epoch},
           {"steps_taken", range.probe.steps_taken},
           {"seed", range.probe.seed},
           {"injected", range.probe.injected},
           {"per_variable", per},
           {"skipped", range.skipped},
           {"warnings", range.warnings},
           {"raw_lower", range.raw_lower},
           {"raw_upper", range.raw_upper},
           {"epsilon_lower", range.lower},
           {"epsilon_upper", range.upper},
           {"log10_lower", pow10_exponent(range.lower)},
           {"log10_upper", pow10_exponent(range.upper)},
           {"regime_at_lower", regime_json(classify_regime(snapshots, range.lower))},
           {"regime_at_upper", regime_json(classify_regime(snapshots, range.upper))},
           {"recommended_probe_points", recommend_probe_points(range)}};
  if (range.probe.iterations_per_epoch > 0) {
    const auto b2 = suggest_beta2(range.probe.iterations_per_epoch, range.probe.hp.beta1);
    out["suggested_beta2"] = json{{"beta2", b2.beta2}, {"window", b2.window},
                                  {"separated_from_beta1", b2.separated_from_beta1}};
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void write_capture_outputs(const std::filesystem::path& dir, std::span<const CaptureRecord> captures) {
  if (captures.empty()) return;
  std::ostringstream fractions;
  fractions << "iteration,epoch,variable,eps,fraction_above\n";
  // Layer-level rows pool the variables of one layer at one iteration.
  std::map<std::pair<std::int64_t, std::string>, std::pair<std::uint64_t, std::uint64_t>> layers;
  std::map<std::int64_t, std::int64_t> epoch_of;
  double eps = captures.front().eps;
  for (const auto& c : captures) {
    std::ostringstream csv;
    write_histogram_csv(csv, c.histogram);
    write_text_file(dir / histogram_file_name(c), csv.str());
    fractions << c.iteration << ',' << c.epoch << ',' << c.variable << ',' << shortest(c.eps) << ','
              << shortest(c.fraction_above) << "\n";
    const std::uint64_t n = c.histogram.total();
    const auto above = static_cast<std::uint64_t>(std::llround(c.fraction_above * static_cast<double>(n)));
    auto& acc = layers[{c.iteration, layer_of(c.variable)}];
    acc.first += above;
    acc.second += n;
    epoch_of[c.iteration] = c.epoch;
    eps = c.eps;
  }
  for (const auto& [key, acc] : layers) {
    const double frac = acc.second == 0 ? 0.0 : static_cast<double>(acc.first) / static_cast<double>(acc.second);
    fractions << key.first << ',' << epoch_of[key.first] << ",layer:" << key.second << ',' << shortest(eps) << ','
              << shortest(frac) << "\n";
  }
  write_text_file(dir / "hist" / "fractions.csv", fractions.str());
}

void write_run_outputs(const std::filesystem::path& dir, const RunRecord& record) {
  write_text_file(dir / "run.json", to_json(record).dump(2) + "\n");
  write_capture_outputs(dir, record.captures);
}

}  // namespace histeps
