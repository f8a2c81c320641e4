#include "histeps/dataset.hpp"

#include <cmath>
#include <string>

#include "histeps/error.hpp"
#include "histeps/random.hpp"

namespace histeps {

void Dataset::validate() const {
  if (class_count == 0) throw ContractError("dataset: class_count must be positive");
  if (features.rank() != 2 || features.rows() != labels.size()) {
    throw ContractError("dataset: features " + shape_string(features.shape()) + " vs " +
                        std::to_string(labels.size()) + " labels");
  }
  if (labels.size() < class_count) throw ContractError("dataset: fewer samples than classes");
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= class_count) {
      throw ContractError("dataset: label " + std::to_string(y) + " out of range");
    }
  }
  if (!features.all_finite()) throw NumericError("dataset: non-finite feature");
}

Tensor Dataset::gather_features(std::span<const std::size_t> indices) const {
  const std::size_t d = dim();
  Tensor out({indices.size(), d});
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t src = indices[r];
    if (src >= size()) throw IndexError("gather: index " + std::to_string(src) + " out of range");
    std::copy_n(features.data() + src * d, d, out.data() + r * d);
  }
  return out;
}

std::vector<int> Dataset::gather_labels(std::span<const std::size_t> indices) const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(labels.at(i));
  return out;
}

Dataset Dataset::head(std::size_t count) const {
  if (count == 0 || count >= size()) return *this;
  const std::size_t d = dim();
  Dataset out;
  out.features = Tensor({count, d}, std::vector<double>(features.data(), features.data() + count * d));
  out.labels.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(count));
  out.class_count = class_count;
  return out;
}

Dataset gen_blobs(const BlobSpec& spec) {
  if (spec.classes == 0) throw ContractError("gen_blobs: classes must be positive");
  if (spec.classes > spec.n) throw ContractError("gen_blobs: more classes than samples");
  if (spec.dim < spec.classes) throw ContractError("gen_blobs: dim must be >= classes");
  if (!(spec.spread >= 0.0) || !std::isfinite(spec.spread)) {
    throw ContractError("gen_blobs: spread must be finite and non-negative");
  }
  Rng rng(spec.seed);
  Dataset out;
  out.class_count = spec.classes;
  out.features = Tensor({spec.n, spec.dim});
  out.labels.resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t cls = i % spec.classes;
    out.labels[i] = static_cast<int>(cls);
    for (std::size_t j = 0; j < spec.dim; ++j) {
      const double center = j == cls ? kBlobCenterScale : 0.0;
      out.features.at(i, j) = center + spec.spread * rng.normal();
    }
  }
  return out;
}

FeatureScaler FeatureScaler::fit(const Dataset& data) {
  const std::size_t n = data.size(), d = data.dim();
  FeatureScaler s;
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += data.features.at(i, j);
  for (auto& m : s.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double c = data.features.at(i, j) - s.mean[j];
      s.stddev[j] += c * c;
    }
  for (auto& v : s.stddev) {
    v = std::sqrt(v / static_cast<double>(n));
    if (!(v > 0.0)) v = 1.0;
  }
  return s;
}

void FeatureScaler::apply(Dataset& data) const {
  const std::size_t d = data.dim();
  if (mean.size() != d) throw DimensionError("FeatureScaler: feature count mismatch");
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      data.features.at(i, j) = (data.features.at(i, j) - mean[j]) / stddev[j];
}

}  // namespace histeps
