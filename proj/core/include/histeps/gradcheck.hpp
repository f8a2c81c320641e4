#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "histeps/autograd.hpp"

namespace histeps {

/// Builds a scalar loss from parameter leaves already registered in `graph`.
using LossBuilder = std::function<NodeId(Graph& graph, std::span<const NodeId> params)>;

struct FiniteDiffOptions {
  double step = 1e-6;
  std::size_t samples = 50;
  std::uint64_t seed = 0;
};

/// Central-difference check of reverse-mode gradients on randomly sampled
/// coordinates. Returns max |fd - g| / (|g| + 1e-12) over the sample.
/// Throws ContractError when step is outside [1e-8, 1e-4] and NumericError
/// when a perturbed loss is not finite.
double finite_diff_check(const LossBuilder& build, std::span<const Tensor> params,
                         const FiniteDiffOptions& options = {});

/// Evaluates the loss and its analytic gradients once.
struct LossAndGradients {
  double loss = 0.0;
  std::vector<Tensor> gradients;
};
LossAndGradients evaluate_with_gradients(const LossBuilder& build, std::span<const Tensor> params);

}  // namespace histeps
