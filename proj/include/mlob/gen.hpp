#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mlob/digraph.hpp"
#include "mlob/error.hpp"
#include "mlob/oracle.hpp"

// Instance generators. Every random generator is a pure function of its
// parameters and seed: mt19937_64 is fully specified by the standard and the
// draws below avoid the implementation-defined std distributions.

namespace mlob {

struct Seed {
  std::uint64_t value = 0;
};

namespace detail {

using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

inline bool bernoulli(Rng& rng, double p) {
  constexpr std::uint64_t kScale = std::uint64_t{1} << 40;
  return uniform_below(rng, kScale) < static_cast<std::uint64_t>(p * static_cast<double>(kScale));
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

inline std::vector<VertexId> random_permutation(int n, Rng& rng) {
  std::vector<VertexId> p(n);
  std::iota(p.begin(), p.end(), 0);
  shuffle(p, rng);
  return p;
}

}  // namespace detail

// H_t vertex ids: r = 0, u_j^i = 1 + (i-1)t + (j-1) for i, j in [t].
inline VertexId ht_vertex(int t, int i, int j) { return j == 0 ? 0 : 1 + (i - 1) * t + (j - 1); }

// Arc count summed over the three families with double arcs counted twice.
// The clique on {u_{t-3}, ..., u_t} repeats the double arc between u_{t-3}
// and u_{t-2}, so the distinct count is this minus 2t.
inline long ht_family_arc_count(int t) { return static_cast<long>(t) * (2 * (t - 2) + (t - 4) + 12); }

inline Digraph gen_ht(int t) {
  if (t < 6) throw Error(ErrorKind::kInvalidArgument, "H_t needs t >= 6");
  std::vector<Arc> arcs;
  for (int i = 1; i <= t; ++i) {
    auto u = [&](int j) { return ht_vertex(t, i, j); };
    for (int j = 0; j <= t - 3; ++j) {
      arcs.push_back({u(j), u(j + 1)});
      arcs.push_back({u(j + 1), u(j)});
    }
    for (int j = 3; j <= t - 2; ++j) arcs.push_back({u(j), u(j - 2)});
    for (int j = t - 3; j <= t; ++j)
      for (int q = t - 3; q <= t; ++q)
        if (j != q) arcs.push_back({u(j), u(q)});
  }
  return Digraph(t * t + 1, arcs);
}

struct SetCoverInstance {
  Digraph graph;
  // l_s = |X| + |Y| - z with z the minimum number of X-vertices dominating Y.
  std::optional<int> known;
};

// s = 0, X = 1..x, Y = x+1..x+y. `edges` lists (x index, y index) pairs,
// oriented from X to Y; s gets an arc to every X-vertex.
inline SetCoverInstance gen_setcover_dag(int x, int y, const std::vector<std::pair<int, int>>& edges,
                                         bool with_answer = true) {
  if (x < 1 || y < 0) throw Error(ErrorKind::kInvalidArgument, "setcover needs x >= 1, y >= 0");
  std::vector<char> covered(y, 0);
  std::vector<Arc> arcs;
  for (int i = 0; i < x; ++i) arcs.push_back({0, 1 + i});
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= x || b < 0 || b >= y)
      throw Error(ErrorKind::kInvalidArgument, "setcover edge out of range");
    arcs.push_back({1 + a, 1 + x + b});
    covered[b] = 1;
  }
  for (int b = 0; b < y; ++b) {
    if (!covered[b])
      throw Error(ErrorKind::kPrecondition,
                  "Y-vertex " + std::to_string(b) + " has no neighbour in X");
  }
  SetCoverInstance out{Digraph(1 + x + y, arcs), std::nullopt};
  if (with_answer && x <= 20) {
    const auto z = min_dominating_subset(x, y, edges);
    if (z) out.known = x + y - *z;
  }
  return out;
}

// Each (x, y) pair independently with probability p; a Y-vertex left
// uncovered gets one uniformly random X-neighbour.
inline std::vector<std::pair<int, int>> gen_random_bipartite(int x, int y, double p, Seed seed) {
  if (x < 1 || y < 0) throw Error(ErrorKind::kInvalidArgument, "bipartite needs x >= 1, y >= 0");
  detail::Rng rng(seed.value);
  std::vector<std::pair<int, int>> edges;
  for (int b = 0; b < y; ++b) {
    bool any = false;
    for (int a = 0; a < x; ++a) {
      if (detail::bernoulli(rng, p)) {
        edges.emplace_back(a, b);
        any = true;
      }
    }
    if (!any) edges.emplace_back(static_cast<int>(detail::uniform_below(rng, x)), b);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

// Random Hamiltonian cycle, then random in-arcs until every in-degree
// reaches the floor.
inline Digraph gen_random_strongly_connected(int n, int in_floor, Seed seed) {
  if (n < 2 || n <= in_floor)
    throw Error(ErrorKind::kInvalidArgument, "need n > min_in_degree and n >= 2");
  detail::Rng rng(seed.value);
  const auto perm = detail::random_permutation(n, rng);
  std::vector<std::vector<VertexId>> in(n);
  for (int i = 0; i < n; ++i) in[perm[(i + 1) % n]].push_back(perm[i]);
  for (VertexId v = 0; v < n; ++v) {
    while (static_cast<int>(in[v].size()) < in_floor) {
      const auto u = static_cast<VertexId>(detail::uniform_below(rng, n));
      if (u == v || std::find(in[v].begin(), in[v].end(), u) != in[v].end()) continue;
      in[v].push_back(u);
    }
  }
  std::vector<Arc> arcs;
  for (VertexId v = 0; v < n; ++v)
    for (VertexId u : in[v]) arcs.push_back({u, v});
  Digraph d(n, arcs);
  if (!is_strongly_connected(d) || min_in_degree(d) < in_floor)
    throw Error(ErrorKind::kGenerationFailed, "strongly connected generator postcondition");
  return d;
}

// Oriented graph with every in-degree exactly 2 and an out-branching. Each
// pass redraws all in-neighbourhoods; 100 passes, then failure.
inline Digraph gen_random_oriented_indegree2(int n, Seed seed) {
  if (n < 5) throw Error(ErrorKind::kInvalidArgument, "in-degree-2 generator needs n >= 5");
  detail::Rng rng(seed.value);
  for (int pass = 0; pass < 100; ++pass) {
    std::vector<std::vector<char>> arc(n, std::vector<char>(n, 0));
    bool ok = true;
    for (VertexId v : detail::random_permutation(n, rng)) {
      std::vector<VertexId> candidates;
      for (VertexId u = 0; u < n; ++u)
        if (u != v && !arc[v][u]) candidates.push_back(u);
      if (candidates.size() < 2) {
        ok = false;
        break;
      }
      for (int pick = 0; pick < 2; ++pick) {
        const auto idx = detail::uniform_below(rng, candidates.size());
        arc[candidates[idx]][v] = 1;
        candidates.erase(candidates.begin() + static_cast<long>(idx));
      }
    }
    if (!ok) continue;
    std::vector<Arc> arcs;
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = 0; v < n; ++v)
        if (arc[u][v]) arcs.push_back({u, v});
    Digraph d(n, arcs);
    if (has_out_branching(d)) return d;
  }
  throw Error(ErrorKind::kGenerationFailed,
              "no in-degree-2 oriented graph with an out-branching within 100 passes");
}

// Random topological order; every non-first vertex gets one random earlier
// parent, then distinct forward arcs are added up to m.
inline Digraph gen_random_dag_single_source(int n, long m, Seed seed) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "need n >= 1");
  const long max_m = static_cast<long>(n) * (n - 1) / 2;
  if (m < n - 1 || m > max_m)
    throw Error(ErrorKind::kInvalidArgument, "m must lie in [n-1, n(n-1)/2]");
  detail::Rng rng(seed.value);
  const auto order = detail::random_permutation(n, rng);
  std::set<std::pair<int, int>> pos_arcs;  // positions in `order`, first < second
  for (int i = 1; i < n; ++i)
    pos_arcs.emplace(static_cast<int>(detail::uniform_below(rng, i)), i);
  const long extra = m - (n - 1);
  if (extra * 2 <= max_m - (n - 1)) {
    while (static_cast<long>(pos_arcs.size()) < m) {
      int a = static_cast<int>(detail::uniform_below(rng, n));
      int b = static_cast<int>(detail::uniform_below(rng, n));
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      pos_arcs.emplace(a, b);
    }
  } else {
    std::vector<std::pair<int, int>> free;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (!pos_arcs.count({a, b})) free.emplace_back(a, b);
    for (long i = 0; i < extra; ++i) {
      const auto j = i + static_cast<long>(detail::uniform_below(rng, free.size() - i));
      std::swap(free[i], free[j]);
      pos_arcs.insert(free[i]);
    }
  }
  std::vector<Arc> arcs;
  for (const auto& [a, b] : pos_arcs) arcs.push_back({order[a], order[b]});
  return Digraph(n, arcs);
}

// Every ordered pair independently with probability p.
inline Digraph gen_random_digraph(int n, double p, Seed seed) {
  if (n < 0) throw Error(ErrorKind::kInvalidArgument, "negative n");
  detail::Rng rng(seed.value);
  std::vector<Arc> arcs;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = 0; v < n; ++v)
      if (u != v && detail::bernoulli(rng, p)) arcs.push_back({u, v});
  return Digraph(n, arcs);
}

// Path-like and strongly connected: double arcs i <-> i+1, plus each pair at
// index distance 2..band with probability p in a random direction. The
// identity ordering has vertex separation at most band.
inline Digraph gen_random_band(int n, int band, double p, Seed seed) {
  if (n < 1 || band < 1) throw Error(ErrorKind::kInvalidArgument, "band needs n, band >= 1");
  detail::Rng rng(seed.value);
  std::vector<Arc> arcs;
  for (VertexId i = 0; i + 1 < n; ++i) {
    arcs.push_back({i, i + 1});
    arcs.push_back({i + 1, i});
    for (int gap = 2; gap <= band && i + gap < n; ++gap) {
      if (!detail::bernoulli(rng, p)) continue;
      if (detail::uniform_below(rng, 2))
        arcs.push_back({i, i + gap});
      else
        arcs.push_back({i + gap, i});
    }
  }
  return Digraph(n, arcs);
}

}  // namespace mlob
