// SPDX-License-Identifier: Apache-2.0
#include "tco/tensor.h"

#include <sstream>
#include <thread>

#include "tco/util.h"

namespace tco {

int64_t shape_numel(const Shape& s) {
  int64_t n = 1;
  for (int64_t e : s) {
    TCO_CHECK(e >= 0, "negative extent in shape " << shape_str(s));
    n *= e;
  }
  return n;
}

std::string shape_str(const Shape& s) {
  std::ostringstream oss;
  oss << "[";
  for (size_t i = 0; i < s.size(); ++i) oss << (i ? "," : "") << s[i];
  oss << "]";
  return oss.str();
}

bool shape_eq(const Shape& a, const Shape& b) { return a == b; }

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  TCO_CHECK(static_cast<int64_t>(data_.size()) == shape_numel(shape_),
            "data length " << data_.size() << " does not match shape " << shape_str(shape_));
}

Tensor Tensor::scalar(double v) {
  Tensor t{Shape{}};
  t.data_[0] = v;
  return t;
}

Tensor Tensor::full(Shape shape, double v) {
  Tensor t(std::move(shape));
  for (double& x : t.data_) x = v;
  return t;
}

double& Tensor::at(std::initializer_list<int64_t> idx) {
  TCO_CHECK(idx.size() == shape_.size(), "index rank mismatch");
  int64_t off = 0;
  size_t d = 0;
  for (int64_t i : idx) {
    TCO_CHECK(i >= 0 && i < shape_[d], "index out of range");
    off = off * shape_[d] + i;
    ++d;
  }
  return data_[static_cast<size_t>(off)];
}

double Tensor::at(std::initializer_list<int64_t> idx) const {
  return const_cast<Tensor*>(this)->at(idx);
}

bool Tensor::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

double Tensor::item() const {
  TCO_CHECK(size() == 1, "item() on tensor of shape " << shape_str(shape_));
  return data_[0];
}

Tensor Tensor::reshaped(Shape shape) const {
  TCO_CHECK(shape_numel(shape) == size(),
            "reshape " << shape_str(shape_) << " -> " << shape_str(shape) << " changes size");
  return Tensor(std::move(shape), data_);
}

int env_thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  const char* env = std::getenv("TCO_THREADS");
  if (!env) return hw;
  int n = std::atoi(env);
  if (n < 1) n = 1;
  if (n > hw) n = hw;
  return n;
}

}  // namespace tco
