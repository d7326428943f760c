#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlob/branching.hpp"
#include "mlob/digraph.hpp"
#include "mlob/error.hpp"

// Brute-force ground truth for small instances. Everything here works on
// vertex bitmasks and shares no code with the decomposition-based solver.

namespace mlob {

struct OracleLimits {
  int max_n_branching = 12;
  int max_n_pathwidth = 12;
};

struct OracleResult {
  int value = 0;
  std::optional<OutTree> witness;
};

struct PathwidthResult {
  int value = 0;
  std::vector<VertexId> ordering;
};

namespace detail {

using Mask = std::uint32_t;

inline std::vector<Mask> out_masks(const Digraph& d) {
  std::vector<Mask> m(d.num_vertices(), 0);
  for (const Arc& a : d.arcs()) m[a.tail] |= Mask{1} << a.head;
  return m;
}

// Vertices of `within` reachable from r using only vertices of `within`.
inline Mask reach_within(const std::vector<Mask>& out, int r, Mask within) {
  Mask reach = Mask{1} << r, frontier = reach;
  while (frontier) {
    Mask next = 0;
    for (Mask f = frontier; f; f &= f - 1) next |= out[std::countr_zero(f)];
    next &= within & ~reach;
    reach |= next;
    frontier = next;
  }
  return reach;
}

// A root r in `inner` reaching all of `inner` inside it, or -1.
inline int spanning_root(const std::vector<Mask>& out, Mask inner) {
  for (Mask f = inner; f; f &= f - 1) {
    const int r = std::countr_zero(f);
    if (reach_within(out, r, inner) == inner) return r;
  }
  return -1;
}

// Out-tree: BFS inside `inner` from r, then every vertex of `attach` hung
// below its smallest in-neighbour in `inner`.
inline OutTree tree_from_internal_set(const Digraph& d, int r, Mask inner, Mask attach) {
  OutTree t(d.num_vertices(), r);
  std::vector<VertexId> queue{r};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (VertexId w : d.out_neighbors(queue[i])) {
      if ((inner >> w & 1) && !t.member[w]) {
        t.attach(w, queue[i]);
        queue.push_back(w);
      }
    }
  }
  for (Mask f = attach; f; f &= f - 1) {
    const VertexId w = std::countr_zero(f);
    for (VertexId u : d.in_neighbors(w)) {
      if (inner >> u & 1) {
        t.attach(w, u);
        break;
      }
    }
  }
  return t;
}

// Next mask with the same popcount (Gosper's hack).
inline Mask next_same_popcount(Mask x) {
  const Mask c = x & (~x + 1);
  const Mask r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

}  // namespace detail

// l_s(D) by minimising the internal vertex set: for n >= 2 an out-branching
// with leaf set L exists iff I = V \ L induces a digraph with an out-branching
// and every vertex outside I has an in-neighbour in I. Subsets are scanned in
// increasing size, so the first hit is optimal.
inline OracleResult exact_max_leaf_out_branching(const Digraph& d,
                                                 const OracleLimits& limits = {}) {
  using detail::Mask;
  const int n = d.num_vertices();
  if (n > limits.max_n_branching || n > 30)
    throw Error(ErrorKind::kTooLarge, "instance too large for the exact oracle");
  if (n == 0) return {};
  if (n == 1) return {1, OutTree(1, 0)};
  if (!has_out_branching(d)) return {};
  const auto out = detail::out_masks(d);
  const Mask all = (Mask{1} << n) - 1;
  for (int s = 1; s <= n; ++s) {
    for (Mask inner = (Mask{1} << s) - 1; inner <= all;
         inner = detail::next_same_popcount(inner)) {
      Mask dominated = inner;
      for (Mask f = inner; f; f &= f - 1) dominated |= out[std::countr_zero(f)];
      if (dominated != all) continue;
      const int r = detail::spanning_root(out, inner);
      if (r < 0) continue;
      return {n - s, detail::tree_from_internal_set(d, r, inner, all & ~inner)};
    }
  }
  return {};
}

// l(D): a single vertex counts as an out-tree with one leaf, so the value is
// at least 1 whenever n >= 1. Otherwise the best out-tree with internal set I
// has exactly the out-neighbourhood of I outside I as its leaves.
inline OracleResult exact_max_leaf_out_tree(const Digraph& d,
                                            const OracleLimits& limits = {}) {
  using detail::Mask;
  const int n = d.num_vertices();
  if (n > limits.max_n_branching || n > 30)
    throw Error(ErrorKind::kTooLarge, "instance too large for the exact oracle");
  if (n == 0) return {};
  const auto out = detail::out_masks(d);
  const Mask all = (Mask{1} << n) - 1;
  OracleResult best{1, OutTree(n, 0)};
  for (Mask inner = 1; inner <= all && inner != 0; ++inner) {
    Mask leaves = 0;
    for (Mask f = inner; f; f &= f - 1) leaves |= out[std::countr_zero(f)];
    leaves &= ~inner;
    const int count = std::popcount(leaves);
    if (count <= best.value) continue;
    const int r = detail::spanning_root(out, inner);
    if (r < 0) continue;
    best = {count, detail::tree_from_internal_set(d, r, inner, leaves)};
  }
  return best;
}

// Exact vertex separation number (= pathwidth) by dynamic programming over
// prefixes: f(S) = max(|boundary(S)|, min over v in S of f(S \ {v})).
inline PathwidthResult exact_pathwidth(const UGraph& g, const OracleLimits& limits = {}) {
  using detail::Mask;
  const int n = g.num_vertices();
  if (n > limits.max_n_pathwidth || n > 24)
    throw Error(ErrorKind::kTooLarge, "instance too large for the exact pathwidth oracle");
  if (n == 0) return {};
  std::vector<Mask> nbr(n, 0);
  for (const auto& [u, v] : g.edges()) {
    nbr[u] |= Mask{1} << v;
    nbr[v] |= Mask{1} << u;
  }
  const Mask all = (Mask{1} << n) - 1;
  std::vector<std::uint8_t> best(std::size_t{all} + 1, 0);
  std::vector<std::uint8_t> last(std::size_t{all} + 1, 0);
  for (Mask s = 1; s <= all; ++s) {
    int boundary = 0;
    for (Mask f = s; f; f &= f - 1) {
      if (nbr[std::countr_zero(f)] & ~s) ++boundary;
    }
    int choice = -1, value = n + 1;
    for (Mask f = s; f; f &= f - 1) {
      const int v = std::countr_zero(f);
      const int sub = best[s & ~(Mask{1} << v)];
      if (sub < value) {
        value = sub;
        choice = v;
      }
    }
    best[s] = static_cast<std::uint8_t>(std::max(boundary, value));
    last[s] = static_cast<std::uint8_t>(choice);
    if (s == all) break;
  }
  PathwidthResult res;
  res.value = best[all];
  res.ordering.resize(n);
  Mask s = all;
  for (int i = n - 1; i >= 0; --i) {
    res.ordering[i] = last[s];
    s &= ~(Mask{1} << last[s]);
  }
  return res;
}

// Minimum number of X-vertices whose neighbourhoods cover Y. `edges` lists
// (x, y) pairs. nullopt if some y has no neighbour at all.
inline std::optional<int> min_dominating_subset(
    int x_size, int y_size, const std::vector<std::pair<int, int>>& edges) {
  using detail::Mask;
  if (x_size > 20) throw Error(ErrorKind::kTooLarge, "x_size above 20");
  std::vector<std::vector<char>> adj(x_size, std::vector<char>(y_size, 0));
  std::vector<char> coverable(y_size, 0);
  for (const auto& [x, y] : edges) {
    if (x < 0 || x >= x_size || y < 0 || y >= y_size)
      throw Error(ErrorKind::kInvalidArgument, "bipartite edge out of range");
    adj[x][y] = 1;
    coverable[y] = 1;
  }
  for (int y = 0; y < y_size; ++y)
    if (!coverable[y]) return std::nullopt;
  if (y_size == 0) return 0;

  // Y-neighbourhood of each x as a bit vector split into 64-bit words.
  const int words = (y_size + 63) / 64;
  std::vector<std::vector<std::uint64_t>> cover(x_size, std::vector<std::uint64_t>(words, 0));
  for (int x = 0; x < x_size; ++x)
    for (int y = 0; y < y_size; ++y)
      if (adj[x][y]) cover[x][y / 64] |= std::uint64_t{1} << (y % 64);

  std::vector<std::uint64_t> acc(words);
  for (int size = 1; size <= x_size; ++size) {
    const Mask all = (Mask{1} << x_size) - 1;
    for (Mask z = (Mask{1} << size) - 1; z <= all; z = detail::next_same_popcount(z)) {
      std::fill(acc.begin(), acc.end(), 0);
      for (Mask f = z; f; f &= f - 1)
        for (int w = 0; w < words; ++w) acc[w] |= cover[std::countr_zero(f)][w];
      bool ok = true;
      for (int y = 0; y < y_size && ok; ++y) ok = acc[y / 64] >> (y % 64) & 1;
      if (ok) return size;
      if (size == x_size) break;
    }
  }
  return std::nullopt;
}

}  // namespace mlob
