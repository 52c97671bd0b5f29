#pragma once

#include <span>

#include "hecsolve/common.hpp"

namespace hecsolve {

/// y = alpha * x + beta * y
void axpby_inplace(Real alpha, std::span<const Real> x, Real beta, std::span<Real> y);

/// z = alpha * x + beta * y
void axpbyz(Real alpha, std::span<const Real> x, Real beta, std::span<const Real> y,
            std::span<Real> z);
Vector axpbyz(Real alpha, std::span<const Real> x, Real beta, std::span<const Real> y);

/// Inner product with a fixed blocked reduction tree; the result is
/// bitwise-stable for any worker count.
Real dot(std::span<const Real> x, std::span<const Real> y);
Real norm2(std::span<const Real> x);

void copy(std::span<const Real> src, std::span<Real> dst);
void fill(std::span<Real> x, Real value);
void scale(Real alpha, std::span<Real> x);

bool all_finite(std::span<const Real> x) noexcept;

}  // namespace hecsolve
