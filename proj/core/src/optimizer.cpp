#include "histeps/optimizer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "histeps/error.hpp"

namespace histeps {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::sgd: return "sgd";
    case Rule::sgd_momentum: return "sgd_momentum";
    case Rule::adagrad: return "adagrad";
    case Rule::rmsprop: return "rmsprop";
    case Rule::adam: return "adam";
    case Rule::diffgrad: return "diffgrad";
    case Rule::adamod: return "adamod";
    case Rule::adabelief: return "adabelief";
    case Rule::madgrad: return "madgrad";
    case Rule::eadam: return "eadam";
    case Rule::adamomentum: return "adamomentum";
  }
  return "?";
}

Rule parse_rule(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '-' || c == '+') c = '_';
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "momentum" || key == "sgdm") key = "sgd_momentum";
  for (Rule r : kAllRules) {
    if (to_string(r) == key) return r;
  }
  throw ContractError("unknown optimizer rule '" + std::string(name) + "'");
}

bool is_adaptive(Rule rule) { return rule != Rule::sgd && rule != Rule::sgd_momentum; }

HyperParams HyperParams::defaults(Rule rule) {
  HyperParams hp;
  switch (rule) {
    case Rule::sgd:
      hp.lr = 1e-2;
      hp.momentum = 0.0;
      break;
    case Rule::sgd_momentum:
      hp.lr = 1e-2;
      break;
    case Rule::adagrad:
      hp.lr = 1e-2;
      hp.eps = 1e-10;
      break;
    case Rule::rmsprop:
      hp.lr = 1e-2;
      hp.beta2 = 0.99;
      hp.eps = 1e-6;
      break;
    case Rule::adabelief:
      hp.eps = 1e-16;
      break;
    case Rule::madgrad:
      hp.lr = 1e-2;
      hp.eps = 1e-6;
      break;
    case Rule::adam:
    case Rule::diffgrad:
    case Rule::adamod:
    case Rule::eadam:
    case Rule::adamomentum:
      break;
  }
  return hp;
}

void HyperParams::validate() const {
  auto unit = [](double x, const char* name) {
    if (!(x >= 0.0 && x < 1.0)) throw ContractError(std::string(name) + " must lie in [0, 1)");
  };
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ContractError("learning rate must be positive and finite");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ContractError("eps must be non-negative and finite");
  unit(beta1, "beta1");
  unit(beta2, "beta2");
  unit(beta3, "beta3");
  unit(momentum, "momentum");
  unit(dampening, "dampening");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw ContractError("weight_decay must be non-negative and finite");
  }
}

OptimizerState init_state(Rule rule, std::span<const Tensor> params, const HyperParams& hp,
                          std::span<const std::string> names) {
  if (params.empty()) throw ContractError("init_state: no parameters");
  if (!names.empty() && names.size() != params.size()) {
    throw ContractError("init_state: names and parameters differ in count");
  }
  hp.validate();
  OptimizerState state{.rule = rule, .hp = hp, .t = 0, .vars = {}};
  state.vars.reserve(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    VariableState vs;
    vs.name = names.empty() ? "var" + std::to_string(k) : names[k];
    vs.shape = params[k].shape();
    const Tensor zero = Tensor::zeros_like(params[k]);
    switch (rule) {
      case Rule::sgd:
        break;
      case Rule::sgd_momentum:
        vs.b = zero;
        break;
      case Rule::adagrad:
      case Rule::rmsprop:
        vs.v = zero;
        break;
      case Rule::diffgrad:
        vs.prev_grad = zero;
        vs.xi = zero;
        vs.m = zero;
        vs.v = zero;
        break;
      case Rule::adamod:
        vs.s = zero;
        vs.m = zero;
        vs.v = zero;
        break;
      case Rule::adam:
      case Rule::adabelief:
      case Rule::madgrad:
      case Rule::eadam:
      case Rule::adamomentum:
        vs.m = zero;
        vs.v = zero;
        break;
    }
    state.vars.push_back(std::move(vs));
  }
  return state;
}

namespace {

// Update of one element: step = rate * direction. A zero direction yields a
// zero step even when the rate is unbounded (eps = 0 with a zero accumulator).
inline double scaled(double rate, double direction) { return direction == 0.0 ? 0.0 : rate * direction; }

inline double sigmoid_friction(double prev, double g) { return 1.0 / (1.0 + std::exp(-std::abs(prev - g))); }

}  // namespace

void step(OptimizerState& state, std::span<Tensor> params, std::span<const Tensor> grads) {
  if (params.size() != state.vars.size() || grads.size() != state.vars.size()) {
    throw ContractError("step: parameter/gradient count does not match optimizer state");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!params[k].same_shape(grads[k])) {
      throw DimensionError("step: gradient shape mismatch for " + state.vars[k].name);
    }
    if (!grads[k].all_finite()) {
      throw NumericError("step: non-finite gradient for " + state.vars[k].name + " at iteration " +
                         std::to_string(state.t + 1));
    }
  }

  const HyperParams& hp = state.hp;
  const std::int64_t t = ++state.t;
  const double td = static_cast<double>(t);
  const double bc1 = 1.0 - std::pow(hp.beta1, td);
  const double bc2 = 1.0 - std::pow(hp.beta2, td);
  const double shift = hp.eps / (1.0 - hp.beta2);  // eps / (1 - beta2) of the shifted accumulators
  const double lambda = hp.lr * std::sqrt(td + 1.0);

  for (std::size_t k = 0; k < params.size(); ++k) {
    VariableState& vs = state.vars[k];
    double* theta = params[k].data();
    const double* grad = grads[k].data();
    const std::size_t n = params[k].size();

    for (std::size_t i = 0; i < n; ++i) {
      const double g = grad[i] + hp.weight_decay * theta[i];
      double delta = 0.0;
      switch (state.rule) {
        case Rule::sgd:
          delta = hp.lr * g;
          break;
        case Rule::sgd_momentum: {
          double& b = vs.b[i];
          b = hp.momentum * b + (1.0 - hp.dampening) * g;
          delta = hp.lr * b;
          break;
        }
        case Rule::adagrad: {
          double& v = vs.v[i];
          v += g * g;
          delta = scaled(hp.lr / (std::sqrt(v) + hp.eps), g);
          break;
        }
        case Rule::rmsprop: {
          double& v = vs.v[i];
          v = hp.beta2 * v + (1.0 - hp.beta2) * g * g;
          delta = scaled(hp.lr / (std::sqrt(v) + hp.eps), g);
          break;
        }
        case Rule::adam: {
          double& m = vs.m[i];
          double& v = vs.v[i];
          m = hp.beta1 * m + (1.0 - hp.beta1) * g;
          v = hp.beta2 * v + (1.0 - hp.beta2) * g * g;
          delta = scaled(hp.lr / (std::sqrt(v / bc2) + hp.eps), m / bc1);
          break;
        }
        case Rule::diffgrad: {
          double& m = vs.m[i];
          double& v = vs.v[i];
          const double xi = sigmoid_friction(vs.prev_grad[i], g);
          vs.prev_grad[i] = g;
          vs.xi[i] = xi;
          m = hp.beta1 * m + (1.0 - hp.beta1) * g;
          v = hp.beta2 * v + (1.0 - hp.beta2) * g * g;
          delta = scaled(hp.lr * xi / (std::sqrt(v / bc2) + hp.eps), m / bc1);
          break;
        }
        case Rule::adamod: {
          double& m = vs.m[i];
          double& v = vs.v[i];
          double& s = vs.s[i];
          m = hp.beta1 * m + (1.0 - hp.beta1) * g;
          v = hp.beta2 * v + (1.0 - hp.beta2) * g * g;
          const double rate = hp.lr / (std::sqrt(v / bc2) + hp.eps);
          s = hp.beta3 * s + (1.0 - hp.beta3) * rate;
          delta = scaled(std::min(rate, s), m / bc1);
          break;
        }
        case Rule::adabelief: {
          double& m = vs.m[i];
          double& v = vs.v[i];
          m = hp.beta1 * m + (1.0 - hp.beta1) * g;
          const double belief = g - m;
          v = hp.beta2 * v + (1.0 - hp.beta2) * belief * belief;
          delta = scaled(hp.lr / (std::sqrt(v / bc2 + shift) + hp.eps), m / bc1);
          break;
        }
        case Rule::madgrad: {
          double& m = vs.m[i];
          double& v = vs.v[i];
          v += lambda * g * g;
          m = hp.beta1 * m + (1.0 - hp.beta1) * g;
          delta = scaled(1.0 / (std::cbrt(v) + hp.eps), m);
          break;
        }
        case Rule::eadam: {
          double& m = vs.m[i];
          double& v = vs.v[i];
          m = hp.beta1 * m + (1.0 - hp.beta1) * g;
          v = hp.beta2 * v + (1.0 - hp.beta2) * g * g;
          delta = scaled(hp.lr / std::sqrt(v / bc2 + shift), m / bc1);
          break;
        }
        case Rule::adamomentum: {
          double& m = vs.m[i];
          double& v = vs.v[i];
          m = hp.beta1 * m + (1.0 - hp.beta1) * g;
          v = hp.beta2 * v + (1.0 - hp.beta2) * m * m;
          delta = scaled(hp.lr / std::sqrt(v / bc2 + shift), m / bc1);
          break;
        }
      }
      theta[i] -= delta;
    }

    if (!params[k].all_finite()) {
      throw NumericError("non-finite update of variable " + vs.name + " at iteration " + std::to_string(t));
    }
  }
}

std::vector<ZhatSnapshot> zhat(const OptimizerState& state, std::int64_t epoch) {
  if (state.t < 1) throw ContractError("zhat: optimizer has not taken a step yet");
  if (!is_adaptive(state.rule)) {
    throw ContractError("zhat: rule " + std::string(to_string(state.rule)) + " has no adaptivity proxy");
  }
  const HyperParams& hp = state.hp;
  const double bc2 = 1.0 - std::pow(hp.beta2, static_cast<double>(state.t));

  std::vector<ZhatSnapshot> out;
  out.reserve(state.vars.size());
  for (std::size_t k = 0; k < state.vars.size(); ++k) {
    const VariableState& vs = state.vars[k];
    ZhatSnapshot snap{.variable = vs.name,
                      .variable_index = k,
                      .values = std::vector<double>(vs.v.size()),
                      .iteration = state.t,
                      .epoch = epoch};
    for (std::size_t i = 0; i < vs.v.size(); ++i) {
      const double v = vs.v[i];
      double z = 0.0;
      switch (state.rule) {
        case Rule::adagrad:
        case Rule::rmsprop:
          z = std::sqrt(v);
          break;
        case Rule::adam:
        case Rule::diffgrad:
        case Rule::adamod:
          z = std::sqrt(v / bc2);
          break;
        case Rule::adabelief:
        case Rule::eadam:
        case Rule::adamomentum:
          z = (1.0 - hp.beta2) * (v / bc2);
          break;
        case Rule::madgrad:
          z = std::cbrt(v);
          break;
        case Rule::sgd:
        case Rule::sgd_momentum:
          break;
      }
      snap.values[i] = z;
    }
    out.push_back(std::move(snap));
  }
  return out;
}

std::vector<Tensor> effective_lr(const OptimizerState& state, const HyperParams& hp) {
  if (state.t < 1) throw ContractError("effective_lr: optimizer has not taken a step yet");
  const double bc2 = 1.0 - std::pow(hp.beta2, static_cast<double>(state.t));
  const double shift = hp.eps / (1.0 - hp.beta2);

  std::vector<Tensor> out;
  out.reserve(state.vars.size());
  for (const VariableState& vs : state.vars) {
    if (!is_adaptive(state.rule)) {
      out.emplace_back(vs.shape, hp.lr);
      continue;
    }
    Tensor rate = Tensor::zeros_like(vs.v);
    for (std::size_t i = 0; i < vs.v.size(); ++i) {
      const double v = vs.v[i];
      double r = 0.0;
      switch (state.rule) {
        case Rule::adagrad:
        case Rule::rmsprop:
          r = hp.lr / (std::sqrt(v) + hp.eps);
          break;
        case Rule::adam:
          r = hp.lr / (std::sqrt(v / bc2) + hp.eps);
          break;
        case Rule::diffgrad:
          r = hp.lr * vs.xi[i] / (std::sqrt(v / bc2) + hp.eps);
          break;
        case Rule::adamod:
          r = std::min(hp.lr / (std::sqrt(v / bc2) + hp.eps), vs.s[i]);
          break;
        case Rule::adabelief:
          r = hp.lr / (std::sqrt(v / bc2 + shift) + hp.eps);
          break;
        case Rule::madgrad:
          r = 1.0 / (std::cbrt(v) + hp.eps);
          break;
        case Rule::eadam:
        case Rule::adamomentum:
          r = hp.lr / std::sqrt(v / bc2 + shift);
          break;
        case Rule::sgd:
        case Rule::sgd_momentum:
          break;
      }
      rate[i] = r;
    }
    out.push_back(std::move(rate));
  }
  return out;
}

}  // namespace histeps
