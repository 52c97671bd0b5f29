#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "hecsolve/partition.hpp"

namespace hecsolve {

Index RowPartition::part_of_new(Index new_row) const {
  const auto it = std::upper_bound(part_ptr.begin(), part_ptr.end(), new_row);
  return static_cast<Index>(it - part_ptr.begin()) - 1;
}

std::vector<Index> RowPartition::inverse() const {
  std::vector<Index> inv(perm.size());
  for (Index i = 0; i < n_rows(); ++i) inv[perm[i]] = i;
  return inv;
}

std::vector<Index> RowPartition::owned_rows(Index p) const {
  const auto inv = inverse();
  std::vector<Index> rows(inv.begin() + part_ptr[p], inv.begin() + part_ptr[p + 1]);
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<Index> RowPartition::labels() const {
  std::vector<Index> lab(perm.size());
  for (Index i = 0; i < n_rows(); ++i) lab[i] = part_of_new(perm[i]);
  return lab;
}

RowPartition RowPartition::identity(Index n) {
  RowPartition p;
  p.n_parts = 1;
  p.perm.resize(n);
  std::iota(p.perm.begin(), p.perm.end(), 0);
  p.part_ptr = {0, n};
  return p;
}

RowPartition RowPartition::from_labels(std::span<const Index> part_of_row, Index n_parts) {
  if (n_parts < 1) throw Error("partition: n_parts must be >= 1");
  RowPartition p;
  p.n_parts = n_parts;
  p.part_ptr.assign(n_parts + 1, 0);
  for (Index lab : part_of_row) {
    if (lab < 0 || lab >= n_parts) throw Error("partition: part label out of range");
    ++p.part_ptr[lab + 1];
  }
  std::partial_sum(p.part_ptr.begin(), p.part_ptr.end(), p.part_ptr.begin());
  std::vector<Index> next(p.part_ptr.begin(), p.part_ptr.end() - 1);
  p.perm.resize(part_of_row.size());
  for (std::size_t i = 0; i < part_of_row.size(); ++i) p.perm[i] = next[part_of_row[i]]++;
  return p;
}

void RowPartition::validate() const {
  const Index n = n_rows();
  if (n_parts < 1 || part_ptr.size() != static_cast<std::size_t>(n_parts) + 1 || part_ptr[0] != 0 ||
      part_ptr.back() != n)
    throw Error("partition: malformed part_ptr");
  for (Index p = 0; p < n_parts; ++p)
    if (part_ptr[p + 1] < part_ptr[p]) throw Error("partition: part_ptr not monotone");
  std::vector<char> seen(n, 0);
  for (Index v : perm) {
    if (v < 0 || v >= n || seen[v]) throw Error("partition: perm is not a bijection");
    seen[v] = 1;
  }
}

namespace {

/// BFS machinery restricted to a vertex subset, with generation stamps so the
/// O(n) arrays are allocated once per partitioning call.
class SubsetBfs {
 public:
  explicit SubsetBfs(const Graph& g) : g_(g), in_set_(g.n, 0), seen_(g.n, 0) {}

  void select(std::span<const Index> subset) {
    ++set_tag_;
    for (Index v : subset) in_set_[v] = set_tag_;
  }
  bool member(Index v) const { return in_set_[v] == set_tag_; }

  Index subset_degree(Index v) const {
    Index d = 0;
    for (Index u : g_.neighbors(v)) d += member(u);
    return d;
  }

  /// BFS from root inside the selected subset. Returns visit order; fills
  /// last_level with the vertices of the deepest level.
  std::vector<Index> run(Index root, Index& depth, std::vector<Index>* last_level = nullptr) {
    ++seen_tag_;
    std::vector<Index> order{root};
    seen_[root] = seen_tag_;
    std::size_t level_begin = 0;
    depth = 0;
    while (true) {
      const std::size_t level_end = order.size();
      for (std::size_t k = level_begin; k < level_end; ++k) {
        for (Index u : g_.neighbors(order[k])) {
          if (!member(u) || seen_[u] == seen_tag_) continue;
          seen_[u] = seen_tag_;
          order.push_back(u);
        }
      }
      if (order.size() == level_end) {
        if (last_level) last_level->assign(order.begin() + level_begin, order.end());
        break;
      }
      level_begin = level_end;
      ++depth;
    }
    return order;
  }

  Index pseudo_peripheral(Index start) {
    Index root = start;
    Index depth = 0;
    std::vector<Index> last;
    run(root, depth, &last);
    while (true) {
      Index best = -1;
      Index best_deg = 0;
      for (Index v : last) {
        const Index d = subset_degree(v);
        if (best < 0 || d < best_deg || (d == best_deg && v < best)) {
          best = v;
          best_deg = d;
        }
      }
      Index cand_depth = 0;
      std::vector<Index> cand_last;
      run(best, cand_depth, &cand_last);
      if (cand_depth <= depth) return root;
      root = best;
      depth = cand_depth;
      last = std::move(cand_last);
    }
  }

  /// Cuthill-McKee style level-set ordering of the whole subset, components
  /// laid out largest first.
  std::vector<Index> order(std::span<const Index> subset) {
    select(subset);
    std::vector<Index> sorted(subset.begin(), subset.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<Index>> components;
    ++comp_tag_;
    if (comp_seen_.empty()) comp_seen_.assign(g_.n, 0);
    for (Index v : sorted) {
      if (comp_seen_[v] == comp_tag_) continue;
      Index depth = 0;
      auto comp = run(v, depth);
      for (Index u : comp) comp_seen_[u] = comp_tag_;
      // store with the lowest vertex first so pseudo_peripheral starts there
      components.push_back(std::move(comp));
    }
    std::stable_sort(components.begin(), components.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    std::vector<Index> result;
    result.reserve(subset.size());
    for (const auto& comp : components) {
      const Index root = pseudo_peripheral(comp.front());
      Index depth = 0;
      const auto ord = run(root, depth);
      result.insert(result.end(), ord.begin(), ord.end());
    }
    return result;
  }

 private:
  const Graph& g_;
  std::vector<int> in_set_;
  std::vector<int> seen_;
  std::vector<int> comp_seen_;
  int set_tag_ = 0;
  int seen_tag_ = 0;
  int comp_tag_ = 0;
};

void bisect(SubsetBfs& bfs, std::vector<Index> vertices, Index q0, Index q1,
            const std::vector<Index>& sizes, std::vector<Index>& label) {
  if (q1 - q0 == 1) {
    for (Index v : vertices) label[v] = q0;
    return;
  }
  const Index qm = q0 + (q1 - q0) / 2;
  Index left = 0;
  for (Index q = q0; q < qm; ++q) left += sizes[q];
  auto ord = bfs.order(vertices);
  std::vector<Index> lhs(ord.begin(), ord.begin() + left);
  std::vector<Index> rhs(ord.begin() + left, ord.end());
  bisect(bfs, std::move(lhs), q0, qm, sizes, label);
  bisect(bfs, std::move(rhs), qm, q1, sizes, label);
}

}  // namespace

RowPartition BisectionPartitioner::partition(const SparseCsr& a, Index n_parts) const {
  require_dims(a.square(), "partition_rows: matrix must be square");
  if (n_parts < 1) throw DimensionError("partition_rows: n_parts must be >= 1");
  if (n_parts > a.n_rows) throw DimensionError("partition_rows: n_parts exceeds n_rows");
  const Index n = a.n_rows;
  if (n_parts == 1) return RowPartition::identity(n);

  std::vector<Index> sizes(n_parts);
  for (Index q = 0; q < n_parts; ++q) sizes[q] = n / n_parts + (q < n % n_parts ? 1 : 0);

  const Graph g = adjacency_graph(a);
  SubsetBfs bfs(g);
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<Index> label(n, -1);
  bisect(bfs, std::move(all), 0, n_parts, sizes, label);
  return RowPartition::from_labels(label, n_parts);
}

RowPartition partition_rows(const SparseCsr& a, Index n_parts) {
  return BisectionPartitioner{}.partition(a, n_parts);
}

SparseCsr permute_symmetric(const SparseCsr& a, const RowPartition& p) {
  require_dims(a.square() && a.n_rows == p.n_rows(), "permute_symmetric: size mismatch");
  const auto inv = p.inverse();
  SparseCsr b(a.n_rows, a.n_cols);
  b.col_idx.reserve(a.nnz());
  b.values.reserve(a.nnz());
  std::vector<std::pair<Index, Real>> row;
  for (Index r = 0; r < a.n_rows; ++r) {
    const Index old = inv[r];
    row.clear();
    for (Offset k = a.row_begin(old); k < a.row_end(old); ++k)
      row.emplace_back(p.perm[a.col_idx[k]], a.values[k]);
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [j, v] : row) {
      b.col_idx.push_back(j);
      b.values.push_back(v);
    }
    b.row_ptr[r + 1] = static_cast<Offset>(b.col_idx.size());
  }
  return b;
}

Vector permute_vector(std::span<const Real> x, const RowPartition& p) {
  require_dims(x.size() == p.perm.size(), "permute_vector: size mismatch");
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[p.perm[i]] = x[i];
  return y;
}

Vector unpermute_vector(std::span<const Real> y, const RowPartition& p) {
  require_dims(y.size() == p.perm.size(), "unpermute_vector: size mismatch");
  Vector x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[p.perm[i]];
  return x;
}

Offset off_block_nnz(const SparseCsr& a_permuted, const RowPartition& p) {
  Offset count = 0;
  for (Index q = 0; q < p.n_parts; ++q) {
    for (Index i = p.part_ptr[q]; i < p.part_ptr[q + 1]; ++i)
      for (Index j : a_permuted.row_cols(i)) count += (j < p.part_ptr[q] || j >= p.part_ptr[q + 1]);
  }
  return count;
}

void write_partition(const std::filesystem::path& path, const RowPartition& p) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write partition file: " + path.string());
  out << "# row part (0-based), n_rows=" << p.n_rows() << " n_parts=" << p.n_parts << '\n';
  const auto lab = p.labels();
  for (std::size_t i = 0; i < lab.size(); ++i) out << i << ' ' << lab[i] << '\n';
}

RowPartition read_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open partition file: " + path.string());
  std::vector<std::pair<long long, long long>> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long long r = 0, q = 0;
    if (!(ss >> r >> q) || r < 0 || q < 0) throw FormatError("partition file: malformed line: " + line);
    pairs.emplace_back(r, q);
  }
  const auto n = static_cast<Index>(pairs.size());
  std::vector<Index> label(n, -1);
  Index n_parts = 0;
  for (const auto& [r, q] : pairs) {
    if (r >= n) throw FormatError("partition file: row index out of range");
    if (label[r] >= 0) throw FormatError("partition file: duplicate row");
    label[r] = static_cast<Index>(q);
    n_parts = std::max(n_parts, static_cast<Index>(q + 1));
  }
  return RowPartition::from_labels(label, n_parts);
}

}  // namespace hecsolve
