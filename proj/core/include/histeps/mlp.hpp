#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "histeps/dataset.hpp"
#include "histeps/gradcheck.hpp"
#include "histeps/tensor.hpp"

namespace histeps {

/// Layer widths from input to output, e.g. {784, 128, 10}. ReLU between
/// layers, softmax cross-entropy on the output.
struct MlpSpec {
  std::vector<std::size_t> widths;
  std::uint64_t seed = 0;

  /// At least one hidden layer and positive widths; throws ContractError.
  void validate() const;
};

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
};

/// Multi-layer perceptron classifier. Weights are He-normal, biases zero.
/// Parameters are ordered layer by layer as (weight [in x out], bias [out]).
class Mlp {
 public:
  explicit Mlp(MlpSpec spec);

  const MlpSpec& spec() const { return spec_; }
  std::vector<Tensor>& parameters() { return params_; }
  const std::vector<Tensor>& parameters() const { return params_; }
  const std::vector<std::string>& parameter_names() const { return names_; }

  /// Loss builder over a fixed batch, for gradient checks and training.
  LossBuilder loss_builder(Tensor features, std::vector<int> labels) const;

  /// Mean loss and gradients for one mini-batch.
  LossAndGradients loss_and_gradients(const Tensor& features, std::span<const int> labels) const;

  /// Forward-only pass over a whole dataset in chunks.
  Evaluation evaluate(const Dataset& data, std::size_t chunk = 1024) const;

  /// FNV-1a over the raw bytes of every parameter, as 16 hex digits.
  std::string digest() const;

 private:
  Tensor logits(const Tensor& features) const;

  MlpSpec spec_;
  std::vector<Tensor> params_;
  std::vector<std::string> names_;
};

}  // namespace histeps
