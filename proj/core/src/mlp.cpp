#include "histeps/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdio>

#include "histeps/autograd.hpp"
#include "histeps/error.hpp"
#include "histeps/random.hpp"

namespace histeps {

void MlpSpec::validate() const {
  if (widths.size() < 3) throw ContractError("MLP needs input, at least one hidden, and output widths");
  for (auto w : widths) {
    if (w == 0) throw ContractError("MLP widths must be positive");
  }
}

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  Rng rng(spec_.seed);
  for (std::size_t layer = 0; layer + 1 < spec_.widths.size(); ++layer) {
    const std::size_t fan_in = spec_.widths[layer];
    const std::size_t fan_out = spec_.widths[layer + 1];
    Tensor w({fan_in, fan_out});
    const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (double& v : w.values()) v = scale * rng.normal();
    params_.push_back(std::move(w));
    params_.emplace_back(Shape{fan_out});
    names_.push_back("layer" + std::to_string(layer) + ".weight");
    names_.push_back("layer" + std::to_string(layer) + ".bias");
  }
}

LossBuilder Mlp::loss_builder(Tensor features, std::vector<int> labels) const {
  return [features = std::move(features), labels = std::move(labels)](
             Graph& g, std::span<const NodeId> params) {
    NodeId h = g.constant(features);
    const std::size_t layers = params.size() / 2;
    for (std::size_t l = 0; l < layers; ++l) {
      h = g.bias_add(g.matmul(h, params[2 * l]), params[2 * l + 1]);
      if (l + 1 < layers) h = g.relu(h);
    }
    return g.softmax_cross_entropy(h, labels);
  };
}

LossAndGradients Mlp::loss_and_gradients(const Tensor& features, std::span<const int> labels) const {
  const LossBuilder build = loss_builder(features, std::vector<int>(labels.begin(), labels.end()));
  return evaluate_with_gradients(build, params_);
}

Tensor Mlp::logits(const Tensor& features) const {
  Tensor h = features;
  const std::size_t layers = params_.size() / 2;
  for (std::size_t l = 0; l < layers; ++l) {
    Tensor z = matmul(h, params_[2 * l]);
    const Tensor& b = params_[2 * l + 1];
    const std::size_t cols = z.cols();
    for (std::size_t r = 0; r < z.rows(); ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        double& v = z.at(r, c);
        v += b[c];
        if (l + 1 < layers && v < 0.0) v = 0.0;
      }
    }
    h = std::move(z);
  }
  return h;
}

Evaluation Mlp::evaluate(const Dataset& data, std::size_t chunk) const {
  const std::size_t n = data.size();
  if (n == 0) return {};
  double loss_sum = 0.0;
  std::size_t correct = 0;
  std::vector<std::size_t> idx;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    const std::size_t end = std::min(n, begin + chunk);
    idx.resize(end - begin);
    for (std::size_t i = begin; i < end; ++i) idx[i - begin] = i;
    const Tensor z = logits(data.gather_features(idx));
    const std::size_t classes = z.cols();
    for (std::size_t r = 0; r < z.rows(); ++r) {
      std::size_t arg = 0;
      double row_max = z.at(r, 0);
      for (std::size_t c = 1; c < classes; ++c) {
        if (z.at(r, c) > row_max) {
          row_max = z.at(r, c);
          arg = c;
        }
      }
      double denom = 0.0;
      for (std::size_t c = 0; c < classes; ++c) denom += std::exp(z.at(r, c) - row_max);
      const auto label = static_cast<std::size_t>(data.labels[begin + r]);
      loss_sum += row_max + std::log(denom) - z.at(r, label);
      if (arg == label) ++correct;
    }
  }
  Evaluation e{loss_sum / static_cast<double>(n), static_cast<double>(correct) / static_cast<double>(n)};
  if (!std::isfinite(e.loss)) throw NumericError("evaluation produced a non-finite loss");
  return e;
}

std::string Mlp::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& p : params_) {
    for (double v : p.values()) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof(double));
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace histeps
