#pragma once

#include <filesystem>
#include <iosfwd>

#include "hecsolve/csr.hpp"

namespace hecsolve {

/// Reads a Matrix Market coordinate file (real or integer; general or
/// symmetric). Symmetric files are expanded to full storage; duplicate
/// entries are summed. Throws FormatError on malformed input and Error when
/// the file cannot be opened.
SparseCsr read_matrix_market(const std::filesystem::path& path);
SparseCsr read_matrix_market(std::istream& in);

/// Writes "coordinate real general", 1-based, full precision.
void write_matrix_market(const std::filesystem::path& path, const SparseCsr& a);
void write_matrix_market(std::ostream& out, const SparseCsr& a);

}  // namespace hecsolve
