#include "histeps/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "histeps/error.hpp"
#include "histeps/random.hpp"

namespace histeps {

namespace {

double forward_loss(const LossBuilder& build, std::span<const Tensor> params) {
  Graph graph;
  std::vector<NodeId> ids;
  ids.reserve(params.size());
  for (const auto& p : params) ids.push_back(graph.parameter(p));
  return graph.value(build(graph, ids)).item();
}

}  // namespace

LossAndGradients evaluate_with_gradients(const LossBuilder& build, std::span<const Tensor> params) {
  Graph graph;
  std::vector<NodeId> ids;
  ids.reserve(params.size());
  for (const auto& p : params) ids.push_back(graph.parameter(p));
  const NodeId loss = build(graph, ids);
  LossAndGradients out;
  out.loss = graph.value(loss).item();
  out.gradients = graph.backward(loss);
  return out;
}

double finite_diff_check(const LossBuilder& build, std::span<const Tensor> params,
                         const FiniteDiffOptions& options) {
  if (!(options.step >= 1e-8 && options.step <= 1e-4)) {
    throw ContractError("finite_diff_check: step must lie in [1e-8, 1e-4]");
  }
  if (params.empty()) throw ContractError("finite_diff_check: no parameters");

  const LossAndGradients analytic = evaluate_with_gradients(build, params);

  std::size_t total = 0;
  for (const auto& p : params) total += p.size();

  std::vector<Tensor> work(params.begin(), params.end());
  Rng rng(options.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < options.samples; ++s) {
    std::size_t flat = static_cast<std::size_t>(rng.below(total));
    std::size_t var = 0;
    while (flat >= work[var].size()) flat -= work[var++].size();

    const double original = work[var][flat];
    work[var][flat] = original + options.step;
    const double plus = forward_loss(build, work);
    work[var][flat] = original - options.step;
    const double minus = forward_loss(build, work);
    work[var][flat] = original;
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw NumericError("finite_diff_check: non-finite perturbed loss");
    }
    const double fd = (plus - minus) / (2.0 * options.step);
    const double g = analytic.gradients[var][flat];
    worst = std::max(worst, std::abs(fd - g) / (std::abs(g) + 1e-12));
  }
  return worst;
}

}  // namespace histeps
