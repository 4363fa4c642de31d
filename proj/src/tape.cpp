#include "minimax/tape.hpp"

#include <cmath>
#include <stdexcept>

namespace minimax {

namespace stable {

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace stable

Tape::Id Tape::push(Op op, Id a, Id b, double value) {
  const Id id = static_cast<Id>(nodes_.size());
  if (op != Op::kConst && op != Op::kInput) {
    if (a < 0 || a >= id || (b >= 0 && b >= id))
      throw std::invalid_argument("tape: parent id out of range");
  }
  nodes_.push_back({op, a, b});
  values_.push_back(value);
  return id;
}

Tape::Id Tape::tanh(Id a) { return push(Op::kTanh, a, -1, std::tanh(val(a))); }

Tape::Id Tape::logistic(Id a) {
  return push(Op::kLogistic, a, -1, stable::logistic(val(a)));
}

Tape::Id Tape::softplus(Id a) {
  return push(Op::kSoftplus, a, -1, stable::softplus(val(a)));
}

Vec Tape::gradient(Id output, std::span<const Id> wrt) const {
  const auto n = static_cast<std::size_t>(output) + 1;
  Vec adj(n, 0.0);
  adj[output] = 1.0;
  for (std::size_t i = n; i-- > 0;) {
    const double a = adj[i];
    if (a == 0.0) continue;
    const Node& node = nodes_[i];
    switch (node.op) {
      case Op::kConst:
      case Op::kInput:
        break;
      case Op::kAdd:
        adj[node.a] += a;
        adj[node.b] += a;
        break;
      case Op::kSub:
        adj[node.a] += a;
        adj[node.b] -= a;
        break;
      case Op::kMul:
        adj[node.a] += a * values_[node.b];
        adj[node.b] += a * values_[node.a];
        break;
      case Op::kNeg:
        adj[node.a] -= a;
        break;
      case Op::kTanh: {
        const double t = values_[i];
        adj[node.a] += a * (1.0 - t * t);
        break;
      }
      case Op::kLogistic: {
        const double s = values_[i];
        adj[node.a] += a * s * (1.0 - s);
        break;
      }
      case Op::kSoftplus:
        adj[node.a] += a * stable::logistic(values_[node.a]);
        break;
    }
  }
  Vec out(wrt.size());
  for (std::size_t k = 0; k < wrt.size(); ++k)
    out[k] = static_cast<std::size_t>(wrt[k]) < n ? adj[wrt[k]] : 0.0;
  return out;
}

std::vector<Tape::Id> Tape::gradient_nodes(Id output, std::span<const Id> wrt) {
  const auto n = static_cast<std::size_t>(output) + 1;
  std::vector<Id> adj(n, -1);
  adj[output] = constant(1.0);

  auto accumulate = [&](Id target, Id contribution) {
    if (static_cast<std::size_t>(target) >= n) return;  // appended node
    adj[target] = adj[target] < 0 ? contribution : add(adj[target], contribution);
  };

  // Iterate the original node range only; appended adjoint nodes have larger
  // ids and are never parents of original nodes.
  for (std::size_t i = n; i-- > 0;) {
    if (adj[i] < 0) continue;
    const Id a = adj[i];
    const Node node = nodes_[i];  // copy: push may reallocate
    const Id self = static_cast<Id>(i);
    switch (node.op) {
      case Op::kConst:
      case Op::kInput:
        break;
      case Op::kAdd:
        accumulate(node.a, a);
        accumulate(node.b, a);
        break;
      case Op::kSub:
        accumulate(node.a, a);
        accumulate(node.b, neg(a));
        break;
      case Op::kMul:
        accumulate(node.a, mul(a, node.b));
        accumulate(node.b, mul(a, node.a));
        break;
      case Op::kNeg:
        accumulate(node.a, neg(a));
        break;
      case Op::kTanh: {
        const Id one = constant(1.0);
        accumulate(node.a, mul(a, sub(one, mul(self, self))));
        break;
      }
      case Op::kLogistic: {
        const Id one = constant(1.0);
        accumulate(node.a, mul(a, mul(self, sub(one, self))));
        break;
      }
      case Op::kSoftplus:
        accumulate(node.a, mul(a, logistic(node.a)));
        break;
    }
  }

  std::vector<Id> out(wrt.size());
  for (std::size_t k = 0; k < wrt.size(); ++k) {
    const Id g = static_cast<std::size_t>(wrt[k]) < n ? adj[wrt[k]] : -1;
    out[k] = g >= 0 ? g : constant(0.0);
  }
  return out;
}

Tape::Id Tape::dot_with_constants(std::span<const Id> ids,
                                  std::span<const double> w) {
  if (ids.size() != w.size())
    throw std::invalid_argument("tape: dot size mismatch");
  Id acc = -1;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Id term = mul(ids[i], constant(w[i]));
    acc = acc < 0 ? term : add(acc, term);
  }
  return acc < 0 ? constant(0.0) : acc;
}

Vec gradient(const TapeBuilder& scalar_fn, std::span<const double> point) {
  Tape tape;
  std::vector<Tape::Id> inputs;
  inputs.reserve(point.size());
  for (double v : point) inputs.push_back(tape.input(v));
  const Tape::Id out = scalar_fn(tape, inputs);
  return tape.gradient(out, inputs);
}

}  // namespace minimax
