#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "histeps/batching.hpp"
#include "histeps/dataset.hpp"
#include "histeps/mlp.hpp"
#include "histeps/optimizer.hpp"
#include "histeps/snapshot.hpp"

namespace histeps {

inline constexpr double kLowerPercentile = 2.0;
inline constexpr double kUpperPercentile = 98.0;

/// 10^round(log10 x), halves rounded away from zero. Throws ContractError for
/// x <= 0 or non-finite x.
double round_pow10(double x);

/// Integer exponent k with round_pow10(x) == 10^k.
int pow10_exponent(double x);

struct VariablePercentiles {
  std::string variable;
  double p2 = 0.0;
  double p98 = 0.0;
};

struct ProbeMetadata {
  Rule rule = Rule::adam;
  HyperParams hp;
  std::size_t iterations_per_epoch = 0;  // T
  std::size_t steps_taken = 0;
  std::uint64_t seed = 0;
  bool injected = false;
};

/// Power-of-ten search range for the immutability hyperparameter.
struct EpsilonRange {
  double lower = 0.0;  // exact power of ten
  double upper = 0.0;  // exact power of ten
  double raw_lower = 0.0;  // min over variables of p2, before rounding
  double raw_upper = 0.0;  // max over variables of p98, before rounding
  std::vector<VariablePercentiles> per_variable;
  std::vector<std::string> skipped;  // variables whose proxy was all zero
  std::vector<std::string> warnings;
  ProbeMetadata probe;
};

/// Bounds from final-iteration snapshots: lower = min_k p2(z_k) and
/// upper = max_k p98(z_k), each rounded to a power of ten. Accumulators start
/// at the largest finite float and at zero. All-zero variables are skipped
/// with a warning; throws EstimationError when every variable is skipped.
EpsilonRange range_from_snapshots(std::span<const ZhatSnapshot> snapshots);

struct ProbeResult {
  EpsilonRange range;
  std::vector<ZhatSnapshot> snapshots;  // proxy at t == T
};

/// Trains `model` for exactly one epoch with `rule` and `probe_hp`, captures
/// the proxy of every variable at the last iteration and derives the range.
/// The model is updated in place.
ProbeResult estimate_eps_range(Rule rule, const HyperParams& probe_hp, Mlp& model, const Dataset& data,
                               const BatchPlan& plan);

struct Beta2Suggestion {
  double beta2 = 0.0;           // 1 - 1/N
  bool separated_from_beta1 = false;
  double window = 0.0;          // 1 / (1 - beta2) == N
};

/// Smallest beta2 whose EMA window 1/(1-beta2) spans `batches_per_epoch`
/// batches. `separated_from_beta1` is true when beta2 > beta1 and the beta2
/// window is at least 10x the beta1 window.
Beta2Suggestion suggest_beta2(std::size_t batches_per_epoch, double beta1 = 0.9);

enum class Regime { fully_immutable, partial, fully_adaptive };
std::string to_string(Regime regime);

struct RegimeThresholds {
  double immutable_at_most = 0.02;
  double adaptive_at_least = 0.98;
};

struct RegimeReport {
  double eps = 0.0;
  double overall_fraction = 0.0;
  std::vector<std::pair<std::string, double>> per_variable;
  Regime regime = Regime::partial;
  RegimeThresholds thresholds;
};

/// Pools fraction_above(eps) over all elements of all snapshots and classifies.
RegimeReport classify_regime(std::span<const ZhatSnapshot> snapshots, double eps, const RegimeThresholds& thresholds = {});

/// The two ends of the range (one value when they coincide).
std::vector<double> recommend_probe_points(const EpsilonRange& range);

}  // namespace histeps
