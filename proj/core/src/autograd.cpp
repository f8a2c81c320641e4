#include "histeps/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "histeps/error.hpp"

namespace histeps {

namespace {

void require_finite(const Tensor& t, const char* what) {
  if (!t.all_finite()) throw NumericError(std::string("non-finite values produced by ") + what);
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) throw DimensionError("matmul expects rank-2 operands");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) {
    throw DimensionError("matmul inner extents differ: " + shape_string(a.shape()) + " . " +
                         shape_string(b.shape()));
  }
  Tensor c({m, n});
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = pc + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = pa[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = pb + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

NodeId Graph::push(Node node) {
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

const Graph::Node& Graph::node(NodeId id) const {
  if (id >= nodes_.size()) throw IndexError("unknown graph node " + std::to_string(id));
  return nodes_[id];
}

const Tensor& Graph::value(NodeId id) const { return node(id).value; }

NodeId Graph::constant(Tensor value) {
  require_finite(value, "constant leaf");
  return push(Node{.op = Op::constant, .value = std::move(value)});
}

NodeId Graph::parameter(Tensor value) {
  require_finite(value, "parameter leaf");
  const NodeId id = push(Node{.op = Op::parameter, .needs_grad = true, .value = std::move(value)});
  parameters_.push_back(id);
  return id;
}

NodeId Graph::matmul(NodeId a, NodeId b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  Tensor out = histeps::matmul(na.value, nb.value);
  require_finite(out, "matmul");
  return push(Node{.op = Op::matmul,
                   .lhs = a,
                   .rhs = b,
                   .needs_grad = na.needs_grad || nb.needs_grad,
                   .value = std::move(out)});
}

NodeId Graph::bias_add(NodeId x, NodeId bias) {
  const Node& nx = node(x);
  const Node& nb = node(bias);
  if (nx.value.rank() != 2) throw DimensionError("bias_add expects a rank-2 input");
  const std::size_t rows = nx.value.rows(), cols = nx.value.cols();
  if (nb.value.size() != cols) {
    throw DimensionError("bias_add: bias " + shape_string(nb.value.shape()) + " vs input " +
                         shape_string(nx.value.shape()));
  }
  Tensor out = nx.value;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) += nb.value[c];
  }
  require_finite(out, "bias_add");
  return push(Node{.op = Op::bias_add,
                   .lhs = x,
                   .rhs = bias,
                   .needs_grad = nx.needs_grad || nb.needs_grad,
                   .value = std::move(out)});
}

NodeId Graph::relu(NodeId x) {
  const Node& nx = node(x);
  Tensor out = nx.value;
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return push(Node{.op = Op::relu, .lhs = x, .needs_grad = nx.needs_grad, .value = std::move(out)});
}

NodeId Graph::softmax_cross_entropy(NodeId logits, std::span<const int> labels) {
  const Node& nl = node(logits);
  if (nl.value.rank() != 2) throw DimensionError("softmax_cross_entropy expects [batch x classes] logits");
  const std::size_t batch = nl.value.rows(), classes = nl.value.cols();
  if (labels.size() != batch) {
    throw DimensionError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                         " labels for batch of " + std::to_string(batch));
  }
  Tensor probs({batch, classes});
  double total = 0.0;
  for (std::size_t r = 0; r < batch; ++r) {
    const int label = labels[r];
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw IndexError("label " + std::to_string(label) + " outside [0, " + std::to_string(classes) + ")");
    }
    std::size_t arg = 0;
    for (std::size_t c = 1; c < classes; ++c) {
      if (nl.value.at(r, c) > nl.value.at(r, arg)) arg = c;
    }
    const double row_max = nl.value.at(r, arg);
    double rest = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      const double e = c == arg ? 1.0 : std::exp(nl.value.at(r, c) - row_max);
      probs.at(r, c) = e;
      if (c != arg) rest += e;
    }
    const double denom = 1.0 + rest;
    for (std::size_t c = 0; c < classes; ++c) probs.at(r, c) /= denom;
    total += (row_max - nl.value.at(r, static_cast<std::size_t>(label))) + std::log1p(rest);
  }
  Tensor loss = Tensor::scalar(total / static_cast<double>(batch));
  require_finite(loss, "softmax_cross_entropy");
  return push(Node{.op = Op::softmax_cross_entropy,
                   .lhs = logits,
                   .needs_grad = nl.needs_grad,
                   .value = std::move(loss),
                   .probs = std::move(probs),
                   .labels = std::vector<int>(labels.begin(), labels.end())});
}

NodeId Graph::sum(NodeId x) {
  const Node& nx = node(x);
  double total = 0.0;
  for (double v : nx.value.values()) total += v;
  Tensor out = Tensor::scalar(total);
  require_finite(out, "sum");
  return push(Node{.op = Op::sum, .lhs = x, .needs_grad = nx.needs_grad, .value = std::move(out)});
}

NodeId Graph::half_squared_norm(NodeId x) {
  const Node& nx = node(x);
  double total = 0.0;
  for (double v : nx.value.values()) total += v * v;
  Tensor out = Tensor::scalar(0.5 * total);
  require_finite(out, "half_squared_norm");
  return push(Node{.op = Op::half_squared_norm,
                   .lhs = x,
                   .needs_grad = nx.needs_grad,
                   .value = std::move(out)});
}

std::vector<Tensor> Graph::backward(NodeId loss) {
  const std::pair<NodeId, double> seed{loss, 1.0};
  return backward(std::span(&seed, 1));
}

std::vector<Tensor> Graph::backward(std::span<const std::pair<NodeId, double>> weighted_losses) {
  if (weighted_losses.empty()) throw ContractError("backward needs at least one loss node");
  std::vector<Tensor> grads(nodes_.size());
  NodeId last = 0;
  for (const auto& [id, weight] : weighted_losses) {
    const Node& n = node(id);
    if (n.value.size() != 1) {
      throw ContractError("backward: loss node " + std::to_string(id) + " is not scalar (" +
                          shape_string(n.value.shape()) + ")");
    }
    if (grads[id].empty()) grads[id] = Tensor::zeros_like(n.value);
    grads[id][0] += weight;
    last = std::max(last, id);
  }

  auto accumulate = [&](NodeId target) -> Tensor& {
    if (grads[target].empty()) grads[target] = Tensor::zeros_like(nodes_[target].value);
    return grads[target];
  };

  last_visits_ = 0;
  for (NodeId id = last + 1; id-- > 0;) {
    const Node& n = nodes_[id];
    if (n.op == Op::constant || n.op == Op::parameter) continue;
    if (!n.needs_grad || grads[id].empty()) continue;
    ++last_visits_;
    const Tensor& up = grads[id];

    switch (n.op) {
      case Op::matmul: {
        const Tensor& a = nodes_[n.lhs].value;
        const Tensor& b = nodes_[n.rhs].value;
        const std::size_t m = a.rows(), k = a.cols(), cols = b.cols();
        if (nodes_[n.lhs].needs_grad) {
          Tensor& da = accumulate(n.lhs);
          // dA = dC . B^T
          for (std::size_t i = 0; i < m; ++i) {
            const double* crow = up.data() + i * cols;
            for (std::size_t p = 0; p < k; ++p) {
              const double* brow = b.data() + p * cols;
              double acc = 0.0;
              for (std::size_t j = 0; j < cols; ++j) acc += crow[j] * brow[j];
              da[i * k + p] += acc;
            }
          }
        }
        if (nodes_[n.rhs].needs_grad) {
          Tensor& db = accumulate(n.rhs);
          // dB = A^T . dC
          for (std::size_t i = 0; i < m; ++i) {
            const double* crow = up.data() + i * cols;
            for (std::size_t p = 0; p < k; ++p) {
              const double aip = a[i * k + p];
              if (aip == 0.0) continue;
              double* dbrow = db.data() + p * cols;
              for (std::size_t j = 0; j < cols; ++j) dbrow[j] += aip * crow[j];
            }
          }
        }
        break;
      }
      case Op::bias_add: {
        if (nodes_[n.lhs].needs_grad) {
          Tensor& dx = accumulate(n.lhs);
          for (std::size_t i = 0; i < up.size(); ++i) dx[i] += up[i];
        }
        if (nodes_[n.rhs].needs_grad) {
          Tensor& db = accumulate(n.rhs);
          const std::size_t rows = up.rows(), cols = up.cols();
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) db[c] += up.at(r, c);
          }
        }
        break;
      }
      case Op::relu: {
        Tensor& dx = accumulate(n.lhs);
        const Tensor& x = nodes_[n.lhs].value;
        for (std::size_t i = 0; i < up.size(); ++i) {
          if (x[i] > 0.0) dx[i] += up[i];
        }
        break;
      }
      case Op::softmax_cross_entropy: {
        Tensor& dl = accumulate(n.lhs);
        const std::size_t batch = n.probs.rows(), classes = n.probs.cols();
        const double scale = up[0] / static_cast<double>(batch);
        for (std::size_t r = 0; r < batch; ++r) {
          for (std::size_t c = 0; c < classes; ++c) {
            double d = n.probs.at(r, c);
            if (static_cast<int>(c) == n.labels[r]) d -= 1.0;
            dl.at(r, c) += scale * d;
          }
        }
        break;
      }
      case Op::sum: {
        Tensor& dx = accumulate(n.lhs);
        for (double& v : dx.values()) v += up[0];
        break;
      }
      case Op::half_squared_norm: {
        Tensor& dx = accumulate(n.lhs);
        const Tensor& x = nodes_[n.lhs].value;
        for (std::size_t i = 0; i < x.size(); ++i) dx[i] += up[0] * x[i];
        break;
      }
      case Op::constant:
      case Op::parameter:
        break;
    }
  }

  std::vector<Tensor> out;
  out.reserve(parameters_.size());
  for (NodeId id : parameters_) {
    Tensor g = grads[id].empty() ? Tensor::zeros_like(nodes_[id].value) : std::move(grads[id]);
    require_finite(g, "backward");
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace histeps
