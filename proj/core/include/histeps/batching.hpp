#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace histeps {

/// How one epoch is cut into mini-batches.
struct BatchPlan {
  std::size_t batch_size = 128;
  std::uint64_t seed = 0;
  bool drop_last = false;
};

/// Number of optimizer iterations in one epoch over n samples.
std::size_t batches_per_epoch(std::size_t n, const BatchPlan& plan);

/// Index slices for `epoch`, drawn from a permutation seeded by (seed, epoch).
/// Throws ContractError for batch_size == 0 or batch_size > n.
std::vector<std::vector<std::size_t>> batches(std::size_t n, const BatchPlan& plan, std::size_t epoch);

}  // namespace histeps
