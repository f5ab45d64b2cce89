// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tco/tensor.h"

namespace tco {

class Tape;
class GradSink;

/// A tensor that optionally participates in reverse-mode differentiation.
/// node < 0 means constant (no tape record).
struct DiffValue {
  Tensor value;
  int32_t node = -1;

  DiffValue() = default;
  DiffValue(Tensor v, int32_t n = -1) : value(std::move(v)), node(n) {}
  bool tracked() const { return node >= 0; }
  const Shape& shape() const { return value.shape(); }
  int64_t size() const { return value.size(); }
};

/// Gradients of one backward pass, keyed by tape node id.
/// Leaves the pass never touched read back as zeros.
class GradientMap {
 public:
  GradientMap() = default;
  GradientMap(std::vector<std::optional<Tensor>> grads, std::vector<Shape> shapes)
      : grads_(std::move(grads)), shapes_(std::move(shapes)) {}

  Tensor get(const DiffValue& v) const;
  bool nonzero(const DiffValue& v) const;
  bool all_finite() const;

 private:
  std::vector<std::optional<Tensor>> grads_;
  std::vector<Shape> shapes_;
};

/// Define-by-run record of primitive operations. One tape is active per
/// thread at a time; it is rebuilt for every optimization step.
class Tape {
 public:
  // Backward rule: receives dL/d(output) and pushes dL/d(parent) contributions.
  using BackwardFn = std::function<void(const Tensor& upstream, GradSink& sink)>;

  Tape() = default;
  ~Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  static Tape* active();

  /// RAII activation. Nesting is a bug and throws.
  class Scope {
   public:
    explicit Scope(Tape& t);
    ~Scope();
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;
  };

  int32_t record(std::vector<int32_t> parents, Shape out_shape, BackwardFn fn);
  int32_t record_leaf(Shape shape);
  size_t size() const { return nodes_.size(); }
  const Shape& node_shape(int32_t id) const { return nodes_[static_cast<size_t>(id)].shape; }

  /// Reverse sweep from a scalar root. Deterministic: nodes are visited in
  /// strict reverse id order and contributions accumulate in push order.
  GradientMap backward(const DiffValue& root) const;

 private:
  struct Node {
    std::vector<int32_t> parents;
    Shape shape;
    BackwardFn backward;  // empty for leaves
  };
  std::vector<Node> nodes_;
  friend class GradSink;
};

class GradSink {
 public:
  GradSink(const Tape& tape, std::vector<std::optional<Tensor>>& grads)
      : tape_(tape), grads_(grads) {}
  /// Accumulate dL/d(node). Shape must match the node's value shape.
  void add(int32_t node, const Tensor& g);

 private:
  const Tape& tape_;
  std::vector<std::optional<Tensor>>& grads_;
};

// ---- construction ----------------------------------------------------------

DiffValue constant(Tensor v);
DiffValue leaf(Tensor v);  // requires an active tape

// ---- elementwise primitives (NumPy-style broadcasting on binaries) ---------

DiffValue add(const DiffValue& a, const DiffValue& b);
DiffValue sub(const DiffValue& a, const DiffValue& b);
DiffValue mul(const DiffValue& a, const DiffValue& b);
DiffValue div(const DiffValue& a, const DiffValue& b);  // error on zero divisor
DiffValue neg(const DiffValue& a);

DiffValue abs(const DiffValue& a);  // subgradient 0 at 0
DiffValue exp(const DiffValue& a);
DiffValue log(const DiffValue& a);   // error on non-positive input
DiffValue sqrt(const DiffValue& a);  // error on non-positive input
DiffValue clamp(const DiffValue& a, double lo, double hi);  // zero slope outside (lo, hi)
DiffValue arccos(const DiffValue& a);  // error when |x| >= 1
DiffValue softplus(const DiffValue& a);
DiffValue sigmoid(const DiffValue& a);
inline DiffValue relu(const DiffValue& a) {
  return clamp(a, 0.0, std::numeric_limits<double>::infinity());
}

// ---- linear algebra / reductions -------------------------------------------

DiffValue matmul(const DiffValue& a, const DiffValue& b, bool trans_a = false,
                 bool trans_b = false);
DiffValue sum(const DiffValue& a);
DiffValue mean(const DiffValue& a);
DiffValue row_sum(const DiffValue& a);        // sum over last axis, keepdim
DiffValue softmax_rows(const DiffValue& a);   // softmax over last axis
DiffValue trace(const DiffValue& a);          // square 2-D

// ---- shape / indexing -------------------------------------------------------

DiffValue reshape(const DiffValue& a, Shape shape);
DiffValue slice(const DiffValue& a, int axis, int64_t start, int64_t len);
DiffValue concat(const std::vector<DiffValue>& parts, int axis);
DiffValue broadcast_to(const DiffValue& a, const Shape& shape);
/// y[i] = x[perm[i]]; perm is a bijection over flat indices. Used for fixed
/// layout shuffles such as unpatchify.
DiffValue permute_flat(const DiffValue& a, std::vector<int64_t> perm, Shape out_shape);

// ---- 3-vector fields ([..., 3] layout) --------------------------------------

DiffValue cross(const DiffValue& a, const DiffValue& b);
/// L2-normalize over the last axis; error if any row norm < min_norm.
DiffValue normalize(const DiffValue& a, double min_norm = 1e-12);

// ---- sugar ------------------------------------------------------------------

inline DiffValue operator+(const DiffValue& a, const DiffValue& b) { return add(a, b); }
inline DiffValue operator-(const DiffValue& a, const DiffValue& b) { return sub(a, b); }
inline DiffValue operator*(const DiffValue& a, const DiffValue& b) { return mul(a, b); }
inline DiffValue operator/(const DiffValue& a, const DiffValue& b) { return div(a, b); }
inline DiffValue operator-(const DiffValue& a) { return neg(a); }

inline DiffValue cst(double v) { return constant(Tensor::scalar(v)); }
inline DiffValue operator*(double s, const DiffValue& a) { return mul(cst(s), a); }
inline DiffValue operator+(const DiffValue& a, double s) { return add(a, cst(s)); }
inline DiffValue operator-(const DiffValue& a, double s) { return sub(a, cst(s)); }

/// General record helper for fused primitives (the renderer registers itself
/// through this). parents may contain -1 entries for constant inputs.
DiffValue record_op(const std::vector<int32_t>& parents, Tensor out, Tape::BackwardFn fn);

}  // namespace tco
