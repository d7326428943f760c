#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlob/error.hpp"

namespace mlob {

// Dense 0-based vertex index.
using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

struct Arc {
  VertexId tail = kNoVertex;
  VertexId head = kNoVertex;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Immutable simple digraph. Self-loops and parallel arcs are dropped on
// construction; opposite arcs u->v, v->u are distinct and both kept.
// Adjacency lists are sorted by neighbour id.
class Digraph {
 public:
  Digraph() = default;

  Digraph(int n, std::span<const Arc> arcs) : n_(n) {
    if (n < 0) throw Error(ErrorKind::kInvalidArgument, "negative vertex count");
    arcs_.reserve(arcs.size());
    for (const Arc& a : arcs) {
      if (a.tail < 0 || a.tail >= n || a.head < 0 || a.head >= n) {
        throw Error(ErrorKind::kInvalidArgument,
                    "arc " + std::to_string(a.tail) + "->" +
                        std::to_string(a.head) + " out of range");
      }
      if (a.tail == a.head) {
        ++dropped_;
        continue;
      }
      arcs_.push_back(a);
    }
    std::sort(arcs_.begin(), arcs_.end());
    const auto before = arcs_.size();
    arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
    dropped_ += static_cast<int>(before - arcs_.size());

    out_offset_.assign(n + 1, 0);
    in_offset_.assign(n + 1, 0);
    for (const Arc& a : arcs_) {
      ++out_offset_[a.tail + 1];
      ++in_offset_[a.head + 1];
    }
    for (int v = 0; v < n; ++v) {
      out_offset_[v + 1] += out_offset_[v];
      in_offset_[v + 1] += in_offset_[v];
    }
    out_adj_.resize(arcs_.size());
    in_adj_.resize(arcs_.size());
    std::vector<int> out_fill(out_offset_.begin(), out_offset_.end() - 1);
    std::vector<int> in_fill(in_offset_.begin(), in_offset_.end() - 1);
    // arcs_ is sorted by (tail, head), so out lists come out sorted; in lists
    // are filled in tail order, which is also sorted.
    for (const Arc& a : arcs_) {
      out_adj_[out_fill[a.tail]++] = a.head;
      in_adj_[in_fill[a.head]++] = a.tail;
    }
  }

  Digraph(int n, std::initializer_list<Arc> arcs)
      : Digraph(n, std::span<const Arc>(arcs.begin(), arcs.size())) {}

  int num_vertices() const { return n_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }

  // Arcs sorted by (tail, head).
  const std::vector<Arc>& arcs() const { return arcs_; }

  std::span<const VertexId> out_neighbors(VertexId v) const {
    return {out_adj_.data() + out_offset_[v],
            static_cast<std::size_t>(out_offset_[v + 1] - out_offset_[v])};
  }
  std::span<const VertexId> in_neighbors(VertexId v) const {
    return {in_adj_.data() + in_offset_[v],
            static_cast<std::size_t>(in_offset_[v + 1] - in_offset_[v])};
  }
  int out_degree(VertexId v) const { return out_offset_[v + 1] - out_offset_[v]; }
  int in_degree(VertexId v) const { return in_offset_[v + 1] - in_offset_[v]; }

  bool has_arc(VertexId u, VertexId v) const {
    auto out = out_neighbors(u);
    return std::binary_search(out.begin(), out.end(), v);
  }

  // Number of self-loops and duplicate arcs discarded at construction.
  int dropped_arcs() const { return dropped_; }

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.arcs_ == b.arcs_;
  }

 private:
  int n_ = 0;
  int dropped_ = 0;
  std::vector<Arc> arcs_;
  std::vector<int> out_offset_{0};
  std::vector<int> in_offset_{0};
  std::vector<VertexId> out_adj_;
  std::vector<VertexId> in_adj_;
};

// Simple undirected graph; edges stored once with first < second.
class UGraph {
 public:
  UGraph() = default;

  UGraph(int n, std::vector<std::pair<VertexId, VertexId>> edges)
      : n_(n), adj_(n) {
    for (auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) {
        throw Error(ErrorKind::kInvalidArgument, "edge endpoint out of range");
      }
      if (u > v) std::swap(u, v);
    }
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [](const auto& e) { return e.first == e.second; }),
                edges.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    for (const auto& [u, v] : edges_) {
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
  }

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }
  int degree(VertexId v) const { return static_cast<int>(adj_[v].size()); }

  bool has_edge(VertexId u, VertexId v) const {
    const auto& list = adj_[u];
    return std::binary_search(list.begin(), list.end(), v);
  }

 private:
  int n_ = 0;
  std::vector<std::pair<VertexId, VertexId>> edges_;
  std::vector<std::vector<VertexId>> adj_;
};

struct SccDecomposition {
  // component_id[v] indexes into components.
  std::vector<int> component_id;
  // Components in reverse topological order of the condensation (sinks first);
  // each component's vertex list is sorted.
  std::vector<std::vector<VertexId>> components;
  Digraph condensation;

  int num_components() const { return static_cast<int>(components.size()); }
};

// Tarjan's algorithm, iterative.
inline SccDecomposition scc(const Digraph& d) {
  const int n = d.num_vertices();
  SccDecomposition out;
  out.component_id.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<VertexId> stack;
  std::vector<std::pair<VertexId, int>> call;  // (vertex, next out-neighbour)
  int counter = 0;

  for (VertexId s = 0; s < n; ++s) {
    if (index[s] != -1) continue;
    call.emplace_back(s, 0);
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      auto succ = d.out_neighbors(v);
      if (pos < static_cast<int>(succ.size())) {
        const VertexId w = succ[pos++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const VertexId done = v;
      call.pop_back();
      if (!call.empty()) {
        const VertexId up = call.back().first;
        low[up] = std::min(low[up], low[done]);
      }
      if (low[done] == index[done]) {
        std::vector<VertexId> comp;
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.component_id[w] = static_cast<int>(out.components.size());
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        out.components.push_back(std::move(comp));
      }
    }
  }

  std::vector<Arc> cond;
  for (const Arc& a : d.arcs()) {
    const int cu = out.component_id[a.tail];
    const int cv = out.component_id[a.head];
    if (cu != cv) cond.push_back({cu, cv});
  }
  out.condensation = Digraph(out.num_components(), cond);
  return out;
}

inline bool is_strongly_connected(const Digraph& d) {
  return d.num_vertices() > 0 && scc(d).num_components() == 1;
}

// Vertex set of the unique strong component without incoming arcs, or nullopt
// when there are zero or several such components. Any returned vertex is a
// valid out-branching root.
inline std::optional<std::vector<VertexId>> has_out_branching(const Digraph& d) {
  if (d.num_vertices() == 0) return std::nullopt;
  const SccDecomposition s = scc(d);
  int source = -1;
  for (int c = 0; c < s.num_components(); ++c) {
    if (s.condensation.in_degree(c) == 0) {
      if (source != -1) return std::nullopt;
      source = c;
    }
  }
  if (source == -1) return std::nullopt;
  return s.components[source];
}

inline UGraph underlying_graph(const Digraph& d) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(d.arcs().size());
  for (const Arc& a : d.arcs()) edges.emplace_back(a.tail, a.head);
  return UGraph(d.num_vertices(), std::move(edges));
}

// Sorted forward-reachability set of v, including v.
inline std::vector<VertexId> reachable_from(const Digraph& d, VertexId v) {
  std::vector<char> seen(d.num_vertices(), 0);
  std::vector<VertexId> queue{v};
  seen[v] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (VertexId w : d.out_neighbors(queue[i])) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

struct InducedSubdigraph {
  Digraph graph;
  // New id -> original id.
  std::vector<VertexId> to_original;
  // Original id -> new id, or kNoVertex.
  std::vector<VertexId> to_local;
};

inline InducedSubdigraph induced_subdigraph(const Digraph& d,
                                            std::span<const VertexId> vertices) {
  InducedSubdigraph out;
  out.to_local.assign(d.num_vertices(), kNoVertex);
  out.to_original.assign(vertices.begin(), vertices.end());
  std::sort(out.to_original.begin(), out.to_original.end());
  out.to_original.erase(std::unique(out.to_original.begin(), out.to_original.end()),
                        out.to_original.end());
  for (std::size_t i = 0; i < out.to_original.size(); ++i) {
    out.to_local[out.to_original[i]] = static_cast<VertexId>(i);
  }
  std::vector<Arc> arcs;
  for (const Arc& a : d.arcs()) {
    const VertexId u = out.to_local[a.tail], v = out.to_local[a.head];
    if (u != kNoVertex && v != kNoVertex) arcs.push_back({u, v});
  }
  out.graph = Digraph(static_cast<int>(out.to_original.size()), arcs);
  return out;
}

// Kahn order; nullopt when d has a directed cycle.
inline std::optional<std::vector<VertexId>> topological_order(const Digraph& d) {
  const int n = d.num_vertices();
  std::vector<int> indeg(n);
  std::vector<VertexId> order;
  for (VertexId v = 0; v < n; ++v) {
    indeg[v] = d.in_degree(v);
    if (indeg[v] == 0) order.push_back(v);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (VertexId w : d.out_neighbors(order[i])) {
      if (--indeg[w] == 0) order.push_back(w);
    }
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

inline bool is_acyclic(const Digraph& d) { return topological_order(d).has_value(); }

inline int min_in_degree(const Digraph& d) {
  int m = d.num_vertices() == 0 ? 0 : d.in_degree(0);
  for (VertexId v = 1; v < d.num_vertices(); ++v) m = std::min(m, d.in_degree(v));
  return m;
}

}  // namespace mlob
