#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace histeps {

/// Adaptivity-proxy values of one updated variable at one iteration.
struct ZhatSnapshot {
  std::string variable;
  std::size_t variable_index = 0;
  std::vector<double> values;  // non-negative
  std::int64_t iteration = 0;
  std::int64_t epoch = 0;
};

}  // namespace histeps
