// SPDX-License-Identifier: Apache-2.0
// Internal broadcasting helpers shared by the autodiff primitives.
#pragma once

#include <algorithm>

#include "tco/tensor.h"
#include "tco/util.h"

namespace tco::detail {

// Right-aligned NumPy broadcasting. Returns the result shape or throws.
inline Shape broadcast_shape(const Shape& a, const Shape& b) {
  Shape out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < out.size(); ++i) {
    int64_t ea = i < out.size() - a.size() ? 1 : a[i - (out.size() - a.size())];
    int64_t eb = i < out.size() - b.size() ? 1 : b[i - (out.size() - b.size())];
    TCO_CHECK(ea == eb || ea == 1 || eb == 1,
              "shape mismatch: " << shape_str(a) << " vs " << shape_str(b));
    out[i] = std::max(ea, eb);
  }
  return out;
}

// Row-major strides with 0 on broadcast (extent-1) axes, right-aligned to `out`.
inline std::vector<int64_t> broadcast_strides(const Shape& in, const Shape& out) {
  std::vector<int64_t> strides(out.size(), 0);
  int64_t s = 1;
  for (int i = static_cast<int>(in.size()) - 1; i >= 0; --i) {
    size_t oi = out.size() - in.size() + static_cast<size_t>(i);
    strides[oi] = (in[static_cast<size_t>(i)] == 1 && out[oi] != 1) ? 0 : s;
    s *= in[static_cast<size_t>(i)];
  }
  return strides;
}

template <class F>
Tensor binary_broadcast(const Tensor& a, const Tensor& b, F&& f) {
  if (a.shape() == b.shape()) {  // fast path
    Tensor out(a.shape());
    const double* pa = a.data();
    const double* pb = b.data();
    double* po = out.data();
    int64_t n = a.size();
    for (int64_t i = 0; i < n; ++i) po[i] = f(pa[i], pb[i]);
    return out;
  }
  Shape os = broadcast_shape(a.shape(), b.shape());
  Tensor out(os);
  auto sa = broadcast_strides(a.shape(), os);
  auto sb = broadcast_strides(b.shape(), os);
  int r = static_cast<int>(os.size());
  std::vector<int64_t> idx(static_cast<size_t>(r), 0);
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  int64_t n = out.size();
  int64_t oa = 0, ob = 0;
  for (int64_t i = 0; i < n; ++i) {
    po[i] = f(pa[oa], pb[ob]);
    for (int d = r - 1; d >= 0; --d) {
      idx[static_cast<size_t>(d)]++;
      oa += sa[static_cast<size_t>(d)];
      ob += sb[static_cast<size_t>(d)];
      if (idx[static_cast<size_t>(d)] < os[static_cast<size_t>(d)]) break;
      oa -= sa[static_cast<size_t>(d)] * os[static_cast<size_t>(d)];
      ob -= sb[static_cast<size_t>(d)] * os[static_cast<size_t>(d)];
      idx[static_cast<size_t>(d)] = 0;
    }
  }
  return out;
}

// Sum `g` (shaped like the broadcast output) down to `target` shape.
inline Tensor reduce_to_shape(const Tensor& g, const Shape& target) {
  if (g.shape() == target) return g;
  Tensor out(target);
  auto st = broadcast_strides(target, g.shape());
  int r = g.rank();
  std::vector<int64_t> idx(static_cast<size_t>(r), 0);
  const double* pg = g.data();
  double* po = out.data();
  int64_t n = g.size();
  int64_t ot = 0;
  const Shape& gs = g.shape();
  for (int64_t i = 0; i < n; ++i) {
    po[ot] += pg[i];
    for (int d = r - 1; d >= 0; --d) {
      idx[static_cast<size_t>(d)]++;
      ot += st[static_cast<size_t>(d)];
      if (idx[static_cast<size_t>(d)] < gs[static_cast<size_t>(d)]) break;
      ot -= st[static_cast<size_t>(d)] * gs[static_cast<size_t>(d)];
      idx[static_cast<size_t>(d)] = 0;
    }
  }
  return out;
}

template <class F>
Tensor unary_map(const Tensor& a, F&& f) {
  Tensor out(a.shape());
  const double* pa = a.data();
  double* po = out.data();
  int64_t n = a.size();
  for (int64_t i = 0; i < n; ++i) po[i] = f(pa[i]);
  return out;
}

// C = op(A) * op(B), plain triple loop; shapes validated by caller.
Tensor matmul_plain(const Tensor& a, const Tensor& b, bool ta, bool tb);

}  // namespace tco::detail
