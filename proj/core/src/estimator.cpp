#include "histeps/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "histeps/error.hpp"
#include "histeps/histogram.hpp"

namespace histeps {

int pow10_exponent(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ContractError("round_pow10: argument must be positive and finite");
  return static_cast<int>(std::round(std::log10(x)));
}

double round_pow10(double x) {
  const int k = pow10_exponent(x);
  // strtod gives the correctly rounded double nearest 10^k.
  const std::string text = "1e" + std::to_string(k);
  return std::strtod(text.c_str(), nullptr);
}

EpsilonRange range_from_snapshots(std::span<const ZhatSnapshot> snapshots) {
  if (snapshots.empty()) throw EstimationError("no snapshots to estimate from");
  EpsilonRange out;
  double lower = static_cast<double>(std::numeric_limits<float>::max());
  double upper = 0.0;
  for (const auto& snap : snapshots) {
    const PositiveOrderStatistics stats(snap.values);
    if (stats.size() == 0) {
      out.skipped.push_back(snap.variable);
      out.warnings.push_back("variable " + snap.variable + " has an all-zero proxy; skipped");
      continue;
    }
    const double p2 = stats.percentile(kLowerPercentile);
    const double p98 = stats.percentile(kUpperPercentile);
    out.per_variable.push_back({snap.variable, p2, p98});
    lower = std::min(lower, p2);
    upper = std::max(upper, p98);
  }
  if (out.per_variable.empty()) throw EstimationError("every variable has an all-zero proxy");
  out.raw_lower = lower;
  out.raw_upper = upper;
  out.lower = round_pow10(lower);
  out.upper = round_pow10(upper);
  return out;
}

ProbeResult estimate_eps_range(Rule rule, const HyperParams& probe_hp, Mlp& model, const Dataset& data,
                               const BatchPlan& plan) {
  if (!is_adaptive(rule)) {
    throw ContractError("estimate_eps_range: rule " + std::string(to_string(rule)) + " has no adaptivity proxy");
  }
  data.validate();
  const auto epoch_batches = batches(data.size(), plan, 0);
  if (epoch_batches.empty()) throw ContractError("estimate_eps_range: the plan yields no iterations");

  auto& params = model.parameters();
  OptimizerState state = init_state(rule, params, probe_hp, model.parameter_names());
  for (const auto& idx : epoch_batches) {
    const Tensor x = data.gather_features(idx);
    const std::vector<int> y = data.gather_labels(idx);
    const auto lg = model.loss_and_gradients(x, y);
    if (!std::isfinite(lg.loss)) {
      throw NumericError("non-finite loss at probe iteration " + std::to_string(state.t + 1));
    }
    step(state, params, lg.gradients);
  }

  ProbeResult result;
  result.snapshots = zhat(state, 1);
  result.range = range_from_snapshots(result.snapshots);
  result.range.probe = ProbeMetadata{.rule = rule,
                                     .hp = probe_hp,
                                     .iterations_per_epoch = epoch_batches.size(),
                                     .steps_taken = static_cast<std::size_t>(state.t),
                                     .seed = plan.seed,
                                     .injected = false};
  return result;
}

Beta2Suggestion suggest_beta2(std::size_t batches_per_epoch, double beta1) {
  if (batches_per_epoch == 0) throw ContractError("suggest_beta2: need at least one batch per epoch");
  const double n = static_cast<double>(batches_per_epoch);
  Beta2Suggestion s;
  s.beta2 = 1.0 - 1.0 / n;
  s.window = n;
  const double beta1_window = 1.0 / (1.0 - beta1);
  s.separated_from_beta1 = s.beta2 > beta1 && s.window >= 10.0 * beta1_window;
  return s;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::fully_immutable: return "fully-immutable";
    case Regime::partial: return "partial";
    case Regime::fully_adaptive: return "fully-adaptive";
  }
  return "?";
}

RegimeReport classify_regime(std::span<const ZhatSnapshot> snapshots, double eps, const RegimeThresholds& thresholds) {
  if (snapshots.empty()) throw ContractError("classify_regime: no snapshots");
  RegimeReport r;
  r.eps = eps;
  r.thresholds = thresholds;
  std::size_t above = 0, total = 0;
  for (const auto& snap : snapshots) {
    const std::size_t a = count_above(snap.values, eps);
    above += a;
    total += snap.values.size();
    r.per_variable.emplace_back(snap.variable, fraction_above(snap.values, eps));
  }
  r.overall_fraction = total == 0 ? 0.0 : static_cast<double>(above) / static_cast<double>(total);
  if (r.overall_fraction <= thresholds.immutable_at_most) r.regime = Regime::fully_immutable;
  else if (r.overall_fraction >= thresholds.adaptive_at_least) r.regime = Regime::fully_adaptive;
  else r.regime = Regime::partial;
  return r;
}

std::vector<double> recommend_probe_points(const EpsilonRange& range) {
  if (!(range.lower > 0.0) || range.lower > range.upper) throw ContractError("recommend_probe_points: invalid range");
  if (range.lower == range.upper) return {range.lower};
  return {range.lower, range.upper};
}

}  // namespace histeps
