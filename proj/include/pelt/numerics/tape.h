// Copyright 2026 The pelt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PELT_NUMERICS_TAPE_H_
#define PELT_NUMERICS_TAPE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "pelt/numerics/tensor.h"

namespace pelt::numerics {

// Handle to a node on a Tape. Only meaningful for the tape that issued it.
struct Var {
  std::uint32_t id = UINT32_MAX;
  bool valid() const { return id != UINT32_MAX; }
};

// Reverse-mode tape for one forward pass. Nodes are appended in evaluation
// order, so reverse insertion order is a valid topological order for the
// backward sweep. First-order only.
template <typename T>
class Tape {
 public:
  using Backward = std::function<void(Tape&, Var self)>;

  // Leaf that reads external storage; `value` must outlive the tape.
  // Its gradient stays on the tape; see grad().
  Var leaf(const Tensor<T>& value, bool requires_grad = true) {
    Node node;
    node.external = &value;
    node.requires_grad = requires_grad;
    return push(std::move(node));
  }

  Var constant(Tensor<T> value) {
    Node node;
    node.owned = std::move(value);
    return push(std::move(node));
  }

  // Used by ops: records an output whose gradient is pushed to its inputs
  // by `backward`. The node requires a gradient iff any input does.
  Var record(Tensor<T> value, std::initializer_list<Var> inputs, Backward backward) {
    Node node;
    node.owned = std::move(value);
    for (Var in : inputs) node.requires_grad = node.requires_grad || requires_grad(in);
    if (node.requires_grad) node.backward = std::move(backward);
    return push(std::move(node));
  }

  const Tensor<T>& value(Var v) const {
    const Node& n = nodes_.at(v.id);
    return n.external ? *n.external : n.owned;
  }
  const Shape& shape(Var v) const { return value(v).shape(); }
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }

  // Gradient buffer for v, allocated (zeroed) on first access.
  std::span<T> grad(Var v) {
    Node& n = nodes_.at(v.id);
    if (n.grad.empty()) n.grad.assign(value(v).size(), T{0});
    return n.grad;
  }
  bool has_grad(Var v) const { return !nodes_.at(v.id).grad.empty(); }

  // Seeds d(output)/d(output) = seed for a scalar output and sweeps back.
  void backward(Var output, T seed = T{1}) {
    if (value(output).size() != 1) {
      throw ContractError("backward() needs a scalar output, got shape " +
                          shape_string(shape(output)));
    }
    grad(output)[0] += seed;
    for (std::size_t i = output.id + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (n.backward && !n.grad.empty()) {
        n.backward(*this, Var{static_cast<std::uint32_t>(i)});
      }
    }
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor<T> owned;
    const Tensor<T>* external = nullptr;
    std::vector<T> grad;
    bool requires_grad = false;
    Backward backward;
  };

  Var push(Node node) {
    nodes_.push_back(std::move(node));
    return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
  }

  std::vector<Node> nodes_;
};

}  // namespace pelt::numerics

#endif  // PELT_NUMERICS_TAPE_H_
