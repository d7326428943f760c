#pragma once

#include <vector>

#include "mlob/digraph.hpp"

namespace mlob::testing {

inline Digraph complete_digraph(int n) {
  std::vector<Arc> arcs;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = 0; v < n; ++v)
      if (u != v) arcs.push_back({u, v});
  return Digraph(n, arcs);
}

inline Digraph directed_cycle(int n) {
  std::vector<Arc> arcs;
  for (VertexId v = 0; v < n; ++v) arcs.push_back({v, (v + 1) % n});
  return Digraph(n, arcs);
}

inline Digraph directed_path(int n) {
  std::vector<Arc> arcs;
  for (VertexId v = 0; v + 1 < n; ++v) arcs.push_back({v, v + 1});
  return Digraph(n, arcs);
}

inline Digraph out_star(int leaves) {
  std::vector<Arc> arcs;
  for (VertexId v = 1; v <= leaves; ++v) arcs.push_back({0, v});
  return Digraph(leaves + 1, arcs);
}

inline UGraph path_graph(int n) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return UGraph(n, e);
}

inline UGraph cycle_graph(int n) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return UGraph(n, e);
}

inline UGraph complete_graph(int n) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return UGraph(n, e);
}

// All digraphs on n vertices, one per subset of the n(n-1) ordered pairs.
template <class Fn>
void for_each_digraph(int n, Fn&& fn) {
  std::vector<Arc> pairs;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = 0; v < n; ++v)
      if (u != v) pairs.push_back({u, v});
  const unsigned long total = 1UL << pairs.size();
  for (unsigned long mask = 0; mask < total; ++mask) {
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (mask >> i & 1) arcs.push_back(pairs[i]);
    fn(Digraph(n, arcs));
  }
}

}  // namespace mlob::testing
