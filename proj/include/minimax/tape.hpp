#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "minimax/vec.hpp"

namespace minimax {

// Reverse-mode tape over a fixed primitive set (enough for tanh MLPs with
// logistic losses). Nodes are appended in topological order; values are
// computed eagerly on append.
//
// Two backward passes are provided:
//   * gradient()       - numeric reverse sweep, adjoints as doubles;
//   * gradient_nodes() - symbolic reverse sweep that *appends* the adjoint
//     computation to the tape, so the returned gradient entries are
//     themselves differentiable. Hessian-vector products are the gradient of
//     <gradient_nodes, constant direction> (double-backward).
class Tape {
 public:
  using Id = std::int32_t;

  Id constant(double v) { return push(Op::kConst, -1, -1, v); }
  Id input(double v) { return push(Op::kInput, -1, -1, v); }

  Id add(Id a, Id b) { return push(Op::kAdd, a, b, val(a) + val(b)); }
  Id sub(Id a, Id b) { return push(Op::kSub, a, b, val(a) - val(b)); }
  Id mul(Id a, Id b) { return push(Op::kMul, a, b, val(a) * val(b)); }
  Id neg(Id a) { return push(Op::kNeg, a, -1, -val(a)); }
  Id tanh(Id a);
  Id logistic(Id a);  // 1 / (1 + exp(-x))
  Id softplus(Id a);  // log(1 + exp(x))

  double value(Id id) const { return values_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }

  // d output / d wrt[i], single numeric reverse sweep.
  Vec gradient(Id output, std::span<const Id> wrt) const;

  // Appends adjoint nodes; entry i computes d output / d wrt[i].
  std::vector<Id> gradient_nodes(Id output, std::span<const Id> wrt);

  // <values(ids), w> as a tape node, w entering as constants (detached).
  Id dot_with_constants(std::span<const Id> ids, std::span<const double> w);

 private:
  enum class Op : std::uint8_t {
    kConst,
    kInput,
    kAdd,
    kSub,
    kMul,
    kNeg,
    kTanh,
    kLogistic,
    kSoftplus,
  };
  struct Node {
    Op op;
    Id a;
    Id b;
  };

  double val(Id id) const { return values_[static_cast<std::size_t>(id)]; }
  Id push(Op op, Id a, Id b, double value);

  std::vector<Node> nodes_;
  Vec values_;
};

namespace stable {
double logistic(double x);
double softplus(double x);
}  // namespace stable

// Builds the scalar expression over fresh inputs at `point` and returns its
// reverse-mode gradient.
using TapeBuilder =
    std::function<Tape::Id(Tape&, std::span<const Tape::Id>)>;
Vec gradient(const TapeBuilder& scalar_fn, std::span<const double> point);

}  // namespace minimax
