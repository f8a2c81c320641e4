#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "histeps/tensor.hpp"

namespace histeps {

using NodeId = std::size_t;

/// Define-by-run tape of primitive ops.
///
/// Nodes are appended in creation order, so every op's inputs precede it and
/// the tape is already topologically sorted. A graph is built for a single
/// forward pass and discarded afterwards.
class Graph {
 public:
  enum class Op {
    constant,
    parameter,
    matmul,
    bias_add,
    relu,
    softmax_cross_entropy,
    sum,
    half_squared_norm,
  };

  /// Leaf that does not receive a gradient (inputs, targets).
  NodeId constant(Tensor value);
  /// Leaf that receives a gradient. Parameters are numbered in creation order.
  NodeId parameter(Tensor value);

  /// [m x k] . [k x n] -> [m x n]
  NodeId matmul(NodeId a, NodeId b);
  /// [b x n] + bias[n], broadcast over rows.
  NodeId bias_add(NodeId x, NodeId bias);
  NodeId relu(NodeId x);
  /// Mean negative log-likelihood of integer labels under softmax(logits).
  NodeId softmax_cross_entropy(NodeId logits, std::span<const int> labels);
  /// Sum of all elements -> scalar.
  NodeId sum(NodeId x);
  /// 0.5 * sum of squares -> scalar.
  NodeId half_squared_norm(NodeId x);

  const Tensor& value(NodeId id) const;
  Op op(NodeId id) const { return nodes_.at(id).op; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t parameter_count() const { return parameters_.size(); }
  std::span<const NodeId> parameters() const { return parameters_; }

  /// Reverse-mode sweep from a scalar node; returns d(loss)/d(parameter) for
  /// every parameter leaf, in creation order.
  std::vector<Tensor> backward(NodeId loss);

  /// Gradient of sum_i weight_i * loss_i in a single reverse sweep.
  std::vector<Tensor> backward(std::span<const std::pair<NodeId, double>> weighted_losses);

  /// Number of ops visited by the most recent backward call.
  std::size_t last_backward_visits() const { return last_visits_; }

 private:
  struct Node {
    Op op;
    NodeId lhs = 0;
    NodeId rhs = 0;
    bool needs_grad = false;
    Tensor value{};
    // softmax_cross_entropy keeps its probabilities and labels for backward.
    Tensor probs{};
    std::vector<int> labels{};
  };

  NodeId push(Node node);
  const Node& node(NodeId id) const;

  std::vector<Node> nodes_;
  std::vector<NodeId> parameters_;
  std::size_t last_visits_ = 0;
};

/// Plain forward matrix product, shared with evaluation paths.
Tensor matmul(const Tensor& a, const Tensor& b);

}  // namespace histeps
