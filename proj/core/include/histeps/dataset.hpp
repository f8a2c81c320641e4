#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "histeps/tensor.hpp"

namespace histeps {

/// Labelled feature matrix. Read-only once built; safe to share across threads.
struct Dataset {
  Tensor features;          // [n x d]
  std::vector<int> labels;  // length n, each < class_count
  std::size_t class_count = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }

  /// Checks the shape/label invariants; throws ContractError.
  void validate() const;

  /// Rows selected by `indices`, in order.
  Tensor gather_features(std::span<const std::size_t> indices) const;
  std::vector<int> gather_labels(std::span<const std::size_t> indices) const;

  /// First `count` samples (count == 0 or >= size keeps everything).
  Dataset head(std::size_t count) const;
};

struct BlobSpec {
  std::size_t n = 2000;
  std::size_t classes = 4;
  std::size_t dim = 16;
  double spread = 0.3;
  std::uint64_t seed = 0;
};

/// Gaussian blobs around the vertices of a scaled simplex: class c is centred
/// at center_scale * e_c and sample i belongs to class i % classes.
/// Requires n >= classes and dim >= classes.
Dataset gen_blobs(const BlobSpec& spec);

inline constexpr double kBlobCenterScale = 2.0;

/// Per-feature z-score statistics, fitted on one dataset and applied to others.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // features with zero spread keep scale 1

  static FeatureScaler fit(const Dataset& data);
  void apply(Dataset& data) const;
};

}  // namespace histeps
