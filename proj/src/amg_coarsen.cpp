#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "hecsolve/amg.hpp"

namespace hecsolve::amg {

StrengthGraph StrengthGraph::transposed() const {
  StrengthGraph t;
  t.n = n;
  t.theta = theta;
  t.ptr.assign(n + 1, 0);
  for (Index j : idx) ++t.ptr[j + 1];
  for (Index i = 0; i < n; ++i) t.ptr[i + 1] += t.ptr[i];
  t.idx.resize(idx.size());
  std::vector<Offset> next(t.ptr.begin(), t.ptr.end() - 1);
  for (Index i = 0; i < n; ++i)
    for (Index j : row(i)) t.idx[next[j]++] = i;
  return t;
}

StrengthGraph strength(const SparseCsr& a, const StrengthOptions& opts) {
  require_dims(a.square(), "strength: matrix must be square");
  StrengthGraph s;
  s.n = a.n_rows;
  s.theta = opts.theta;
  s.ptr.assign(a.n_rows + 1, 0);
  for (Index i = 0; i < a.n_rows; ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_vals(i);
    Real max_coupling = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] == i) continue;
      const Real c = opts.negative_only ? -vals[k] : std::abs(vals[k]);
      max_coupling = std::max(max_coupling, c);
    }
    if (max_coupling > 0.0) {
      const Real cut = opts.theta * max_coupling;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (cols[k] == i) continue;
        const Real c = opts.negative_only ? -vals[k] : std::abs(vals[k]);
        if (c > 0.0 && c >= cut) s.idx.push_back(cols[k]);
      }
    }
    s.ptr[i + 1] = static_cast<Offset>(s.idx.size());
  }
  return s;
}

CfSplitting CfSplitting::from_flags(std::vector<char> flags) {
  CfSplitting cf;
  cf.coarse = std::move(flags);
  cf.coarse_index.assign(cf.coarse.size(), -1);
  for (std::size_t i = 0; i < cf.coarse.size(); ++i)
    if (cf.coarse[i]) cf.coarse_index[i] = cf.n_coarse++;
  return cf;
}

bool splitting_is_valid(const StrengthGraph& s, const CfSplitting& cf) {
  for (Index i = 0; i < s.n; ++i) {
    if (cf.is_coarse(i)) continue;
    const auto row = s.row(i);
    if (std::none_of(row.begin(), row.end(), [&](Index j) { return cf.is_coarse(j); })) return false;
  }
  return true;
}

namespace {

enum : char { kUndecided = 0, kCoarse = 1, kFine = 2 };

/// Promotes every F point without a strong C dependency to C.
void enforce_interpolation_support(const StrengthGraph& s, std::vector<char>& state) {
  for (Index i = 0; i < s.n; ++i) {
    if (state[i] == kCoarse) continue;
    const auto row = s.row(i);
    if (std::none_of(row.begin(), row.end(), [&](Index j) { return state[j] == kCoarse; }))
      state[i] = kCoarse;
  }
}

CfSplitting to_splitting(const std::vector<char>& state) {
  std::vector<char> flags(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) flags[i] = state[i] == kCoarse;
  return CfSplitting::from_flags(std::move(flags));
}

}  // namespace

CfSplitting rs_coarsen(const StrengthGraph& s) {
  const Index n = s.n;
  if (s.edges() == 0) return CfSplitting::from_flags(std::vector<char>(n, 1));
  const StrengthGraph st = s.transposed();

  std::vector<char> state(n, kUndecided);
  std::vector<Index> measure(n);
  // ordered by (-measure, index): begin() is the next C point
  std::set<std::pair<Index, Index>> queue;
  for (Index i = 0; i < n; ++i) {
    measure[i] = static_cast<Index>(st.row(i).size());
    queue.emplace(-measure[i], i);
  }
  auto bump = [&](Index k, Index delta) {
    queue.erase({-measure[k], k});
    measure[k] += delta;
    queue.emplace(-measure[k], k);
  };

  while (!queue.empty()) {
    const Index i = queue.begin()->second;
    queue.erase(queue.begin());
    state[i] = kCoarse;
    for (Index j : st.row(i)) {
      if (state[j] != kUndecided) continue;
      state[j] = kFine;
      queue.erase({-measure[j], j});
      for (Index k : s.row(j))
        if (state[k] == kUndecided) bump(k, 1);
    }
    for (Index k : s.row(i))
      if (state[k] == kUndecided) bump(k, -1);
  }

  // Second pass: strongly coupled F points must share a strong C point.
  std::vector<Index> c_mark(n, -1);
  for (Index i = 0; i < n; ++i) {
    if (state[i] != kFine) continue;
    for (Index j : s.row(i))
      if (state[j] == kCoarse) c_mark[j] = i;
    Index tentative = -1;
    bool promote_self = false;
    for (Index j : s.row(i)) {
      if (state[j] != kFine) continue;
      const auto sj = s.row(j);
      const bool shared = std::any_of(sj.begin(), sj.end(), [&](Index k) { return c_mark[k] == i; });
      if (shared) continue;
      if (tentative >= 0) {
        promote_self = true;
        break;
      }
      tentative = j;
      c_mark[j] = i;
    }
    if (promote_self) {
      state[i] = kCoarse;
    } else if (tentative >= 0) {
      state[tentative] = kCoarse;
    }
  }
  enforce_interpolation_support(s, state);
  return to_splitting(state);
}

CfSplitting cljp_coarsen(const StrengthGraph& s, std::uint64_t seed) {
  const Index n = s.n;
  if (s.edges() == 0) return CfSplitting::from_flags(std::vector<char>(n, 1));
  const StrengthGraph st = s.transposed();

  // Edge e = position in s.idx: row i depends on s.idx[e]. st_edge maps the
  // transposed entries back to those positions.
  std::vector<Offset> st_edge(st.idx.size());
  {
    std::vector<Offset> next(st.ptr.begin(), st.ptr.end() - 1);
    for (Index i = 0; i < n; ++i)
      for (Offset e = s.ptr[i]; e < s.ptr[i + 1]; ++e) st_edge[next[s.idx[e]]++] = e;
  }
  std::vector<char> alive(s.idx.size(), 1);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> unit(0.0, 1.0);
  std::vector<Real> weight(n);
  for (Index i = 0; i < n; ++i) weight[i] = static_cast<Real>(st.row(i).size()) + unit(rng);

  std::vector<char> state(n, kUndecided);
  // Points nobody depends on and that depend on nobody carry no information.
  for (Index i = 0; i < n; ++i)
    if (weight[i] < 1.0) state[i] = s.row(i).empty() ? kCoarse : kFine;

  auto beats = [&](Index i, Index j) {
    return weight[i] > weight[j] || (weight[i] == weight[j] && i < j);
  };
  std::vector<Index> selected;
  std::vector<Index> c_mark(n, -1);
  Index round = 0;
  while (true) {
    selected.clear();
    for (Index i = 0; i < n; ++i) {
      if (state[i] != kUndecided) continue;
      bool local_max = true;
      for (Offset e = s.ptr[i]; e < s.ptr[i + 1] && local_max; ++e) {
        const Index j = s.idx[e];
        if (alive[e] && state[j] == kUndecided && !beats(i, j)) local_max = false;
      }
      for (Offset t = st.ptr[i]; t < st.ptr[i + 1] && local_max; ++t) {
        const Index j = st.idx[t];
        if (alive[st_edge[t]] && state[j] == kUndecided && !beats(i, j)) local_max = false;
      }
      if (local_max) selected.push_back(i);
    }
    if (selected.empty()) break;
    for (Index c : selected) state[c] = kCoarse;

    for (Index c : selected) {
      ++round;
      // Rule 1: points c depends on lose the dependency.
      for (Offset e = s.ptr[c]; e < s.ptr[c + 1]; ++e) {
        if (!alive[e]) continue;
        alive[e] = 0;
        const Index j = s.idx[e];
        if (state[j] == kUndecided) weight[j] -= 1.0;
      }
      // Rule 2: for j depending on c, any k depending on both j and c no
      // longer needs j.
      for (Offset t = st.ptr[c]; t < st.ptr[c + 1]; ++t) {
        const Index k = st.idx[t];
        if (alive[st_edge[t]]) c_mark[k] = round;  // k depends on c
      }
      for (Offset t = st.ptr[c]; t < st.ptr[c + 1]; ++t) {
        const Offset e_jc = st_edge[t];
        if (!alive[e_jc]) continue;
        alive[e_jc] = 0;
        const Index j = st.idx[t];
        if (state[j] != kUndecided) continue;
        for (Offset u = st.ptr[j]; u < st.ptr[j + 1]; ++u) {
          const Offset e_kj = st_edge[u];
          const Index k = st.idx[u];
          if (!alive[e_kj] || c_mark[k] != round) continue;
          alive[e_kj] = 0;
          weight[j] -= 1.0;
        }
      }
    }
    for (Index i = 0; i < n; ++i)
      if (state[i] == kUndecided && weight[i] < 1.0) state[i] = kFine;
  }
  for (Index i = 0; i < n; ++i)
    if (state[i] == kUndecided) state[i] = kFine;
  enforce_interpolation_support(s, state);
  return to_splitting(state);
}

}  // namespace hecsolve::amg
