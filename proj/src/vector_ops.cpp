#include "hecsolve/vector_ops.hpp"

#include <cmath>

#include "hecsolve/parallel.hpp"

namespace hecsolve {

void axpby_inplace(Real alpha, std::span<const Real> x, Real beta, std::span<Real> y) {
  require_dims(x.size() == y.size(), "axpby: length mismatch");
  parallel_for(static_cast<std::ptrdiff_t>(y.size()), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (auto i = b; i < e; ++i) y[i] = alpha * x[i] + beta * y[i];
  });
}

void axpbyz(Real alpha, std::span<const Real> x, Real beta, std::span<const Real> y,
            std::span<Real> z) {
  require_dims(x.size() == y.size() && y.size() == z.size(), "axpbyz: length mismatch");
  parallel_for(static_cast<std::ptrdiff_t>(z.size()), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (auto i = b; i < e; ++i) z[i] = alpha * x[i] + beta * y[i];
  });
}

Vector axpbyz(Real alpha, std::span<const Real> x, Real beta, std::span<const Real> y) {
  Vector z(x.size());
  axpbyz(alpha, x, beta, y, z);
  return z;
}

Real dot(std::span<const Real> x, std::span<const Real> y) {
  require_dims(x.size() == y.size(), "dot: length mismatch");
  return deterministic_reduce(static_cast<std::ptrdiff_t>(x.size()),
                              [&](std::ptrdiff_t b, std::ptrdiff_t e) {
                                Real s = 0.0;
                                for (auto i = b; i < e; ++i) s += x[i] * y[i];
                                return s;
                              });
}

Real norm2(std::span<const Real> x) { return std::sqrt(dot(x, x)); }

void copy(std::span<const Real> src, std::span<Real> dst) {
  require_dims(src.size() == dst.size(), "copy: length mismatch");
  parallel_for(static_cast<std::ptrdiff_t>(src.size()), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (auto i = b; i < e; ++i) dst[i] = src[i];
  });
}

void fill(std::span<Real> x, Real value) {
  parallel_for(static_cast<std::ptrdiff_t>(x.size()), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (auto i = b; i < e; ++i) x[i] = value;
  });
}

void scale(Real alpha, std::span<Real> x) {
  parallel_for(static_cast<std::ptrdiff_t>(x.size()), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (auto i = b; i < e; ++i) x[i] *= alpha;
  });
}

bool all_finite(std::span<const Real> x) noexcept {
  for (Real v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace hecsolve
