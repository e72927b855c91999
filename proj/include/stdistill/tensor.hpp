#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "stdistill/errors.hpp"
#include "stdistill/rng.hpp"

namespace stdistill {

using Shape = std::vector<int>;

std::string shape_str(const Shape& s);

namespace detail {

struct TensorImpl {
  Shape shape;
  std::vector<double> data;
  bool requires_grad = false;

  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
};

}  // namespace detail

// Immutable dense row-major tensor, 64-bit values. Ops are free functions;
// when a Tape is active and an operand requires gradients, the op records a
// node for the backward pass (define-by-run, tape rebuilt every forward).
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, double fill, bool requires_grad = false);
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor scalar(double v, bool requires_grad = false);
  static Tensor zeros_like(const Tensor& t);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  int ndim() const { return static_cast<int>(impl_->shape.size()); }
  int dim(int i) const { return impl_->shape[static_cast<std::size_t>(i)]; }
  std::int64_t size() const { return impl_->size(); }
  bool requires_grad() const { return impl_ && impl_->requires_grad; }

  const std::vector<double>& values() const { return impl_->data; }
  double operator[](std::int64_t flat) const { return impl_->data[static_cast<std::size_t>(flat)]; }
  double at(std::initializer_list<int> idx) const;
  double item() const;

  // Same values, requires_grad stripped; detached from any tape history.
  Tensor detach() const;

  const std::shared_ptr<detail::TensorImpl>& impl() const { return impl_; }
  static Tensor from_impl(std::shared_ptr<detail::TensorImpl> impl);

 private:
  std::shared_ptr<detail::TensorImpl> impl_;
};

struct TapeNode {
  const char* op;
  std::vector<std::shared_ptr<detail::TensorImpl>> refs;  // inputs + output, kept alive
  std::function<void()> backward;                         // reads/writes grad buffers via the owning tape
};

// Records one forward pass; confined to a single training step and worker.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Seeds d(loss)/d(loss) = 1 and replays nodes in reverse creation order.
  void backward(const Tensor& loss);

  // Gradient of `loss` w.r.t. `t`; zeros when t was never reached.
  Tensor grad(const Tensor& t) const;

  void record(TapeNode node) { nodes_.push_back(std::move(node)); }
  std::size_t node_count() const { return nodes_.size(); }

  // Accumulation buffer, zero-initialised on first touch.
  std::vector<double>& grad_buf(const detail::TensorImpl* t);
  const std::vector<double>* find_grad(const detail::TensorImpl* t) const;

 private:
  std::vector<TapeNode> nodes_;
  std::unordered_map<const detail::TensorImpl*, std::vector<double>> grads_;
};

Tape* active_tape();

// RAII: make `t` the active tape on this thread for the scope's lifetime.
class TapeScope {
 public:
  explicit TapeScope(Tape& t);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* prev_;
};

// ---------------------------------------------------------------------------
// Differentiable op set (everything the two models need, nothing more).

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // elementwise
Tensor scale(const Tensor& a, double c);

Tensor matmul(const Tensor& a, const Tensor& b);     // [m,k] x [k,n]
Tensor matmul_nt(const Tensor& a, const Tensor& b);  // [m,k] x [n,k]^T -> [m,n]
Tensor add_rowvec(const Tensor& a, const Tensor& v); // [m,n] + [n], broadcast over rows

Tensor relu(const Tensor& x);
Tensor leaky_relu(const Tensor& x, double slope);
// Identity when train is false; otherwise zeroes entries with probability
// `rate` and rescales survivors by 1/(1-rate). Draws from `rng` in order.
Tensor dropout(const Tensor& x, double rate, bool train, RngStream& rng);

Tensor softmax(const Tensor& x, int axis);
Tensor log_softmax_rows(const Tensor& x);  // 2-D, along the last axis

Tensor sum(const Tensor& x);  // -> scalar
Tensor reshape(const Tensor& x, Shape s);
// out.row(i) = x.row(rows[i]); duplicate indices accumulate in the backward.
Tensor gather_rows(const Tensor& x, const std::vector<int>& rows);

// Causal 1-D convolution over independent blocks of `block_len` rows.
// x: [B*block_len, d]; kernel: [f, d, d]; bias: [d]. Left padding of f-1
// zeros, so out[t] = bias + sum_{k<f} x[t-k] . kernel[k].
Tensor conv1d_causal(const Tensor& x, const Tensor& kernel, const Tensor& bias,
                     int block_len);

// Each row divided by its L2 norm; all-zero rows stay zero.
Tensor rows_normalize(const Tensor& x);

// Contrastive reduction over a cosine matrix M[a,b] = cos(student_a, target_b):
// sum_n [ -M[n,n]/tau + log sum_{a != n} exp(M[a,n]/tau) ].
// The denominator excludes the positive pair, so terms can go negative.
Tensor nce_excl_diag(const Tensor& cosmat, double tau);

// ---------------------------------------------------------------------------
// Low-level helpers for ops defined outside this translation unit (graph
// propagation lives next to SpatialGraph).

namespace detail {

Tensor make_op_output(Shape shape, std::vector<double> data, bool requires_grad);
bool should_record(std::initializer_list<const Tensor*> inputs);
void check_finite(const Tensor& t, const char* op);

}  // namespace detail

}  // namespace stdistill
