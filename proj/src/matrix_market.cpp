#include "hecsolve/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

namespace hecsolve {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

SparseCsr read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("matrix market: empty input");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw FormatError("matrix market: missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate")
    throw FormatError("matrix market: only 'matrix coordinate' is supported");
  if (field != "real" && field != "integer" && field != "double")
    throw FormatError("matrix market: unsupported field '" + field + "'");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general")
    throw FormatError("matrix market: unsupported symmetry '" + symmetry + "'");

  do {
    if (!std::getline(in, line)) throw FormatError("matrix market: missing size line");
  } while (line.empty() || line[0] == '%');

  long long rows = 0, cols = 0, entries = 0;
  {
    std::istringstream size(line);
    if (!(size >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0)
      throw FormatError("matrix market: malformed size line");
    if (rows > std::numeric_limits<Index>::max() || cols > std::numeric_limits<Index>::max())
      throw FormatError("matrix market: dimensions exceed index range");
  }

  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
  for (long long e = 0; e < entries; ++e) {
    long long i = 0, j = 0;
    Real v = 0.0;
    if (!(in >> i >> j >> v)) throw FormatError("matrix market: truncated entry list");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw FormatError("matrix market: entry index out of range");
    const auto r = static_cast<Index>(i - 1);
    const auto c = static_cast<Index>(j - 1);
    trip.push_back({r, c, v});
    if (symmetric && r != c) trip.push_back({c, r, v});
  }
  return csr_from_triplets(static_cast<Index>(rows), static_cast<Index>(cols), std::move(trip));
}

SparseCsr read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file: " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseCsr& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n_rows << ' ' << a.n_cols << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < a.n_rows; ++i) {
    for (Offset k = a.row_begin(i); k < a.row_end(i); ++k)
      out << i + 1 << ' ' << a.col_idx[k] + 1 << ' ' << a.values[k] << '\n';
  }
}

void write_matrix_market(const std::filesystem::path& path, const SparseCsr& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write matrix file: " + path.string());
  write_matrix_market(out, a);
}

}  // namespace hecsolve
