#include "histeps/batching.hpp"

#include <algorithm>

#include "histeps/error.hpp"
#include "histeps/random.hpp"

namespace histeps {

namespace {

void check_plan(std::size_t n, const BatchPlan& plan) {
  if (plan.batch_size == 0) throw ContractError("batch_size must be positive");
  if (plan.batch_size > n) throw ContractError("batch_size exceeds dataset size");
}

}  // namespace

std::size_t batches_per_epoch(std::size_t n, const BatchPlan& plan) {
  check_plan(n, plan);
  return plan.drop_last ? n / plan.batch_size : (n + plan.batch_size - 1) / plan.batch_size;
}

std::vector<std::vector<std::size_t>> batches(std::size_t n, const BatchPlan& plan, std::size_t epoch) {
  const std::size_t count = batches_per_epoch(n, plan);
  Rng rng(mix_seed(plan.seed, epoch));
  const auto perm = permutation(n, rng);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(count);
  for (std::size_t b = 0; b < count; ++b) {
    const std::size_t begin = b * plan.batch_size;
    const std::size_t end = std::min(n, begin + plan.batch_size);
    out.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(begin),
                     perm.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

}  // namespace histeps
