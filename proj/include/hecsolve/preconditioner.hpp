#pragma once

#include <memory>
#include <span>
#include <string>

#include "hecsolve/csr.hpp"
#include "hecsolve/ilu.hpp"

namespace hecsolve {

/// z ~= M^{-1} r. A preconditioner is a fixed linear operator for the
/// duration of a solve.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual Index size() const = 0;
  virtual void apply(std::span<const Real> r, std::span<Real> z) const = 0;
  virtual std::string name() const = 0;
  /// Wall time spent building the preconditioner.
  double setup_seconds() const noexcept { return setup_seconds_; }

 protected:
  double setup_seconds_ = 0.0;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  explicit IdentityPreconditioner(Index n) : n_(n) {}
  Index size() const override { return n_; }
  void apply(std::span<const Real> r, std::span<Real> z) const override;
  std::string name() const override { return "none"; }

 private:
  Index n_;
};

/// Global ILU(k) on the whole matrix.
class IluPreconditioner final : public Preconditioner {
 public:
  IluPreconditioner(const SparseCsr& a, Index k, const IluOptions& opts = {});
  Index size() const override { return factors_.size(); }
  void apply(std::span<const Real> r, std::span<Real> z) const override;
  std::string name() const override { return "ilu(" + std::to_string(k_) + ")"; }
  const IluFactors& factors() const noexcept { return factors_; }

 private:
  Index k_;
  IluFactors factors_;
};

}  // namespace hecsolve
