#include <algorithm>

#include "hecsolve/partition.hpp"

namespace hecsolve {

RasBlocks extract_blocks(const SparseCsr& a, const std::vector<std::vector<Index>>& owned,
                         Index overlap) {
  require_dims(a.square(), "extract_blocks: matrix must be square");
  if (overlap < 0) throw Error("extract_blocks: overlap must be >= 0");
  const Index n = a.n_rows;
  {
    std::vector<char> covered(n, 0);
    Index count = 0;
    for (const auto& rows : owned) {
      for (Index r : rows) {
        if (r < 0 || r >= n || covered[r]) throw Error("extract_blocks: owned sets must be disjoint");
        covered[r] = 1;
        ++count;
      }
    }
    if (count != n) throw Error("extract_blocks: owned sets must cover every row");
  }

  const Graph g = overlap > 0 ? adjacency_graph(a) : Graph{};
  RasBlocks out;
  out.n = n;
  out.overlap = overlap;
  out.blocks.resize(owned.size());

  std::vector<Index> in_block(n, -1);
  for (std::size_t b = 0; b < owned.size(); ++b) {
    RasBlock& blk = out.blocks[b];
    const auto tag = static_cast<Index>(b);
    blk.owned = owned[b];
    std::sort(blk.owned.begin(), blk.owned.end());
    for (Index r : blk.owned) in_block[r] = tag;

    std::vector<Index> frontier = blk.owned;
    std::vector<std::pair<Index, Index>> added;  // (row, layer)
    for (Index layer = 1; layer <= overlap && !frontier.empty(); ++layer) {
      std::vector<Index> next;
      for (Index v : frontier) {
        for (Index u : g.neighbors(v)) {
          if (in_block[u] == tag) continue;
          in_block[u] = tag;
          next.push_back(u);
        }
      }
      for (Index u : next) added.emplace_back(u, layer);
      frontier = std::move(next);
    }
    std::sort(added.begin(), added.end());
    for (const auto& [row, layer] : added) {
      blk.overlap.push_back(row);
      blk.overlap_layer.push_back(layer);
    }

    blk.local_to_global = blk.owned;
    blk.local_to_global.insert(blk.local_to_global.end(), blk.overlap.begin(), blk.overlap.end());
    std::sort(blk.local_to_global.begin(), blk.local_to_global.end());
    blk.is_owned.resize(blk.local_to_global.size());
    for (std::size_t k = 0; k < blk.local_to_global.size(); ++k)
      blk.is_owned[k] = std::binary_search(blk.owned.begin(), blk.owned.end(), blk.local_to_global[k]);
    blk.local_matrix = principal_submatrix(a, blk.local_to_global);
  }
  return out;
}

RasBlocks extract_ras_blocks(const SparseCsr& a_permuted, const RowPartition& p, Index overlap) {
  require_dims(a_permuted.n_rows == p.n_rows(), "extract_ras_blocks: size mismatch");
  std::vector<std::vector<Index>> owned(p.n_parts);
  for (Index q = 0; q < p.n_parts; ++q) {
    owned[q].resize(p.part_size(q));
    for (Index i = 0; i < p.part_size(q); ++i) owned[q][i] = p.part_ptr[q] + i;
  }
  return extract_blocks(a_permuted, owned, overlap);
}

}  // namespace hecsolve
