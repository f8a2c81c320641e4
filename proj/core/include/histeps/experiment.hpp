#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "histeps/batching.hpp"
#include "histeps/dataset.hpp"
#include "histeps/estimator.hpp"
#include "histeps/histogram.hpp"
#include "histeps/optimizer.hpp"

namespace histeps {

using json = nlohmann::json;

struct DatasetConfig {
  enum class Kind { blobs, idx };
  Kind kind = Kind::blobs;
  // blobs
  BlobSpec blobs;
  std::size_t test_n = 0;  // blobs test set size, 0 for none
  bool normalize = true;   // z-score blobs features (fitted on the training split)
  // idx
  std::string train_images;
  std::string train_labels;
  std::string test_images;
  std::string test_labels;
  std::size_t limit = 10000;  // training subset size, 0 for the full file
  std::size_t test_limit = 0;
};

struct CaptureConfig {
  std::size_t every_k = 0;  // 0 disables capture
  std::optional<double> eps;  // threshold for fraction_above; defaults to the optimizer eps
  HistogramRange range;
};

/// Everything a run depends on. A run is a pure function of its config.
struct RunConfig {
  DatasetConfig dataset;
  std::vector<std::size_t> hidden = {32};
  std::uint64_t model_seed = 0;
  Rule rule = Rule::adam;
  HyperParams hp = HyperParams::defaults(Rule::adam);
  std::size_t epochs = 1;
  std::size_t batch_size = 128;
  bool drop_last = false;
  std::uint64_t seed = 0;  // batch order
  CaptureConfig capture;
  std::string output_dir;

  /// Throws ConfigError.
  void validate() const;
  BatchPlan batch_plan() const { return {batch_size, seed, drop_last}; }
};

json to_json(const HyperParams& hp);
/// Missing fields take the rule's published defaults.
HyperParams hyperparams_from_json(const json& j, Rule rule);
json to_json(const RunConfig& config);
/// Throws ConfigError on malformed input.
RunConfig run_config_from_json(const json& j);
RunConfig load_run_config(const std::filesystem::path& path);

struct LoadedData {
  Dataset train;
  std::optional<Dataset> test;
};
LoadedData load_data(const DatasetConfig& config);

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> test_loss;
  std::optional<double> test_accuracy;
};

struct CaptureRecord {
  std::int64_t iteration = 0;
  std::int64_t epoch = 0;  // 1-based epoch the iteration belongs to
  std::string variable;
  double eps = 0.0;
  double fraction_above = 0.0;
  LogMagnitudeHistogram histogram;
};

struct RunRecord {
  RunConfig config;
  std::size_t iterations_per_epoch = 0;
  std::vector<EpochMetrics> epochs;
  std::string params_digest;
  std::vector<CaptureRecord> captures;
  double wall_seconds = 0.0;  // never serialized into run.json

  /// Test accuracy when a test split exists, otherwise train accuracy.
  std::string metric_name() const;
  double metric(const EpochMetrics& e) const;
  /// Highest metric across epochs and the first epoch reaching it.
  double best_metric() const;
  std::size_t best_epoch() const;
};

/// Called at every capture with the proxy snapshots (for streaming consumers).
using CaptureCallback = std::function<void(std::span<const ZhatSnapshot>)>;

/// Trains an MLP per `config`. Throws NumericError on a non-finite loss or
/// update, naming the iteration (and variable for updates).
RunRecord run_training(const RunConfig& config, const LoadedData& data, const CaptureCallback& on_capture = {});
RunRecord run_training(const RunConfig& config);

/// Deterministic record serialization (no wall time).
json to_json(const RunRecord& record);

struct GridAxes {
  std::vector<double> alphas;
  std::vector<double> epsilons;
  std::vector<double> beta2s;

  std::size_t cell_count() const { return alphas.size() * epsilons.size() * beta2s.size(); }
};

struct GridCell {
  double alpha = 0.0;
  double epsilon = 0.0;
  double beta2 = 0.0;
  double best_metric = 0.0;
  std::int64_t best_epoch = -1;
  std::string error;  // empty when the run succeeded

  bool ok() const { return error.empty(); }
};

struct GridResult {
  GridAxes axes;
  std::string metric;
  std::vector<GridCell> cells;  // alpha-major, then epsilon, then beta2

  std::size_t failures() const;
  /// Index of the successful cell with the highest metric (first on ties).
  std::optional<std::size_t> argmax() const;
};

struct GridOptions {
  std::size_t workers = 1;
  /// Execution order over canonical cell indices; empty means canonical.
  std::vector<std::size_t> execution_order;
};

/// One independent, identically seeded run per (alpha, epsilon, beta2) cell.
/// Per-cell failures are recorded and the sweep continues.
GridResult run_grid(const RunConfig& base, const GridAxes& axes, const LoadedData& data,
                    const GridOptions& options = {});

void write_grid_csv(std::ostream& out, const GridResult& grid);
/// Reads `alpha,epsilon,beta2,best_metric,best_epoch` rows; axes are
/// reconstructed from the distinct values in order of appearance.
GridResult read_grid_csv(std::istream& in);
json to_json(const GridResult& grid);

/// Snapshot interchange file: {"snapshots": [{"variable", "values", "iteration", "epoch"}]}.
std::vector<ZhatSnapshot> read_snapshots(const std::filesystem::path& path);
void write_snapshots(const std::filesystem::path& path, std::span<const ZhatSnapshot> snapshots);

/// Estimation report: rule, probe hyperparameters, T, per-variable (p2, p98),
/// rounded bounds, regime at both bounds, two-point recommendation.
json estimation_report(const EpsilonRange& range, std::span<const ZhatSnapshot> snapshots);

/// Histograms of `snapshots` with fraction_above(eps) for each.
std::vector<CaptureRecord> capture_records(std::span<const ZhatSnapshot> snapshots, double eps,
                                           const HistogramRange& range = {});

/// Writes run.json plus, when present, hist/<variable>_iter<t>.csv files and
/// hist/fractions.csv.
void write_run_outputs(const std::filesystem::path& dir, const RunRecord& record);
void write_capture_outputs(const std::filesystem::path& dir, std::span<const CaptureRecord> captures);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace histeps
