#include "hecsolve/preconditioner.hpp"

#include "hecsolve/timer.hpp"
#include "hecsolve/vector_ops.hpp"

namespace hecsolve {

void IdentityPreconditioner::apply(std::span<const Real> r, std::span<Real> z) const {
  require_dims(r.size() == static_cast<std::size_t>(n_), "preconditioner: length mismatch");
  copy(r, z);
}

IluPreconditioner::IluPreconditioner(const SparseCsr& a, Index k, const IluOptions& opts) : k_(k) {
  Stopwatch sw;
  factors_ = ilu(a, k, opts);
  setup_seconds_ = sw.seconds();
}

void IluPreconditioner::apply(std::span<const Real> r, std::span<Real> z) const {
  trisolve(factors_, r, z);
}

}  // namespace hecsolve
