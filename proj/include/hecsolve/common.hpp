#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hecsolve {

using Index = std::int32_t;   // row / column index
using Offset = std::int64_t;  // position into a nonzero array
using Real = double;

using Vector = std::vector<Real>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input matrix violates the canonical CSR contract.
class FormatError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A pivot (or diagonal) vanished during factorization or a sweep.
class ZeroPivotError : public Error {
 public:
  ZeroPivotError(const std::string& what, Index row) : Error(what), row_(row) {}
  Index row() const noexcept { return row_; }

 private:
  Index row_;
};

inline void require_dims(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace hecsolve
