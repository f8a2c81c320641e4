#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "histeps/snapshot.hpp"
#include "histeps/tensor.hpp"

namespace histeps {

enum class Rule {
  sgd,
  sgd_momentum,
  adagrad,
  rmsprop,
  adam,
  diffgrad,
  adamod,
  adabelief,
  madgrad,
  eadam,
  adamomentum,
};

inline constexpr Rule kAllRules[] = {
    Rule::sgd,      Rule::sgd_momentum, Rule::adagrad,   Rule::rmsprop, Rule::adam,       Rule::diffgrad,
    Rule::adamod,   Rule::adabelief,    Rule::madgrad,   Rule::eadam,   Rule::adamomentum,
};

std::string_view to_string(Rule rule);
/// Accepts the canonical names ("adam", "sgd_momentum", ...) case-insensitively,
/// with '-' and '+' accepted for '_'. Throws ContractError on unknown names.
Rule parse_rule(std::string_view name);

/// True for the nine rules with an adaptivity proxy (everything but SGD variants).
bool is_adaptive(Rule rule);

/// Optimizer hyperparameters. Each rule reads only the fields it needs:
/// RMSprop uses beta2 as its single decay rate, AdaMod adds beta3, and
/// SGD+Momentum uses momentum/dampening.
struct HyperParams {
  double lr = 1e-3;
  double eps = 1e-8;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double beta3 = 0.9999;
  double momentum = 0.9;
  double dampening = 0.0;
  double weight_decay = 0.0;

  /// Published defaults of a rule.
  static HyperParams defaults(Rule rule);

  /// lr > 0, eps >= 0, decay rates in [0, 1), weight_decay >= 0.
  void validate() const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// Per-variable buffers. Only those the rule needs are allocated.
struct VariableState {
  std::string name;
  Shape shape;
  Tensor m;          // first moment
  Tensor v;          // second moment / accumulator
  Tensor s;          // AdaMod smoothed step size
  Tensor prev_grad;  // DiffGrad g_{t-1}
  Tensor xi;         // DiffGrad friction of the last step
  Tensor b;          // SGD+Momentum buffer
};

struct OptimizerState {
  Rule rule = Rule::adam;
  HyperParams hp;
  std::int64_t t = 0;
  std::vector<VariableState> vars;
};

/// Zeroed buffers, t = 0. Names default to "var<k>".
OptimizerState init_state(Rule rule, std::span<const Tensor> params, const HyperParams& hp,
                          std::span<const std::string> names = {});

/// One update of every variable. Weight decay, when set, is folded into the
/// gradient (g + wd * theta) before any moment update. Throws NumericError
/// naming the variable when an update is not finite.
void step(OptimizerState& state, std::span<Tensor> params, std::span<const Tensor> grads);

/// Adaptivity proxy per variable for the current state. Requires t >= 1 and an
/// adaptive rule.
std::vector<ZhatSnapshot> zhat(const OptimizerState& state, std::int64_t epoch = 0);

/// Element-wise adaptive learning rate of the current state evaluated with `hp`
/// (AdaMod and DiffGrad additionally use their stored s and xi buffers).
std::vector<Tensor> effective_lr(const OptimizerState& state, const HyperParams& hp);

}  // namespace histeps
