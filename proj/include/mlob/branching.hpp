#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlob/digraph.hpp"
#include "mlob/error.hpp"

namespace mlob {

// Out-tree embedded in a host digraph, stored as a parent map over host ids.
// parent[root] == kNoVertex; non-members also have kNoVertex and member == 0.
struct OutTree {
  VertexId root = kNoVertex;
  std::vector<VertexId> parent;
  std::vector<char> member;

  OutTree() = default;

  // The single-vertex out-tree {root} inside a host of n vertices.
  OutTree(int n, VertexId root_vertex)
      : root(root_vertex), parent(n, kNoVertex), member(n, 0) {
    member[root_vertex] = 1;
  }

  int host_size() const { return static_cast<int>(parent.size()); }
  bool contains(VertexId v) const { return member[v] != 0; }

  void attach(VertexId child, VertexId new_parent) {
    member[child] = 1;
    parent[child] = new_parent;
  }

  int size() const {
    return static_cast<int>(std::count(member.begin(), member.end(), 1));
  }
  bool is_spanning() const { return size() == host_size(); }

  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < host_size(); ++v)
      if (member[v]) out.push_back(v);
    return out;
  }

  // Tree arcs sorted by (tail, head).
  std::vector<Arc> arcs() const {
    std::vector<Arc> out;
    for (VertexId v = 0; v < host_size(); ++v)
      if (member[v] && v != root) out.push_back({parent[v], v});
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<int> out_degrees() const {
    std::vector<int> deg(host_size(), 0);
    for (VertexId v = 0; v < host_size(); ++v)
      if (member[v] && v != root) ++deg[parent[v]];
    return deg;
  }

  friend bool operator==(const OutTree&, const OutTree&) = default;
};

// A spanning out-tree. Same representation; spanning-ness is checked by
// is_out_branching.
using OutBranching = OutTree;

inline int leaf_count(const OutTree& t) {
  const auto deg = t.out_degrees();
  int leaves = 0;
  for (VertexId v = 0; v < t.host_size(); ++v)
    if (t.member[v] && deg[v] == 0) ++leaves;
  return leaves;
}

// Builds an out-tree from an arc set over n host vertices: the arcs must give
// every covered vertex but one exactly one in-arc and be acyclic. On failure
// returns nullopt and, if `why` is non-null, a description naming the defect
// (for cycles, the vertices on the cycle).
inline std::optional<OutTree> out_tree_from_arcs(int n, std::span<const Arc> arcs,
                                                 std::string* why = nullptr) {
  auto fail = [&](std::string msg) -> std::optional<OutTree> {
    if (why) *why = std::move(msg);
    return std::nullopt;
  };
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<char> covered(n, 0);
  for (const Arc& a : arcs) {
    if (a.tail < 0 || a.head < 0 || a.tail >= n || a.head >= n)
      return fail("arc endpoint out of range");
    if (a.tail == a.head) return fail("self-loop at " + std::to_string(a.tail));
    if (parent[a.head] != kNoVertex)
      return fail("vertex " + std::to_string(a.head) + " has two parents");
    parent[a.head] = a.tail;
    covered[a.head] = covered[a.tail] = 1;
  }
  if (arcs.empty()) return fail("empty arc set");

  // Cycle detection by walking parent pointers with colouring.
  std::vector<char> state(n, 0);  // 0 new, 1 on walk, 2 done
  for (VertexId s = 0; s < n; ++s) {
    if (!covered[s] || state[s]) continue;
    std::vector<VertexId> walk;
    VertexId v = s;
    while (v != kNoVertex && state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = parent[v];
    }
    if (v != kNoVertex && state[v] == 1) {
      std::string cyc = "cycle:";
      auto it = std::find(walk.begin(), walk.end(), v);
      std::vector<VertexId> cycle(it, walk.end());
      std::reverse(cycle.begin(), cycle.end());
      for (VertexId c : cycle) cyc += " " + std::to_string(c);
      return fail(cyc);
    }
    for (VertexId w : walk) state[w] = 2;
  }

  VertexId root = kNoVertex;
  for (VertexId v = 0; v < n; ++v) {
    if (covered[v] && parent[v] == kNoVertex) {
      if (root != kNoVertex)
        return fail("several roots: " + std::to_string(root) + " and " +
                    std::to_string(v));
      root = v;
    }
  }
  if (root == kNoVertex) return fail("no root");
  OutTree t(n, root);
  for (VertexId v = 0; v < n; ++v)
    if (covered[v] && v != root) t.attach(v, parent[v]);
  return t;
}

// Empty optional iff t is a valid out-tree of d; otherwise the first defect.
inline std::optional<std::string> out_tree_violation(const Digraph& d, const OutTree& t) {
  const int n = d.num_vertices();
  if (t.host_size() != n) return "host size mismatch";
  if (t.root < 0 || t.root >= n || !t.member[t.root]) return "root not a member";
  if (t.parent[t.root] != kNoVertex) return "root has a parent";
  for (VertexId v = 0; v < n; ++v) {
    if (!t.member[v] || v == t.root) continue;
    const VertexId p = t.parent[v];
    if (p == kNoVertex) return "vertex " + std::to_string(v) + " has no parent";
    if (!t.member[p]) return "parent of " + std::to_string(v) + " not in tree";
    if (!d.has_arc(p, v))
      return "tree arc " + std::to_string(p) + "->" + std::to_string(v) +
             " is not an arc of the digraph";
  }
  std::string why;
  const auto arcs = t.arcs();
  if (!arcs.empty() && !out_tree_from_arcs(n, arcs, &why)) return why;
  return std::nullopt;
}

inline bool is_out_tree(const Digraph& d, const OutTree& t) {
  return !out_tree_violation(d, t).has_value();
}

inline bool is_out_branching(const Digraph& d, const OutTree& t) {
  return is_out_tree(d, t) && t.is_spanning();
}

// Children lists, depths and Euler intervals of an out-tree.
struct TreeIndex {
  std::vector<std::vector<VertexId>> children;
  std::vector<int> depth;
  std::vector<int> tin, tout;
  std::vector<VertexId> preorder;

  explicit TreeIndex(const OutTree& t)
      : children(t.host_size()),
        depth(t.host_size(), -1),
        tin(t.host_size(), -1),
        tout(t.host_size(), -1) {
    for (VertexId v = 0; v < t.host_size(); ++v)
      if (t.member[v] && v != t.root) children[t.parent[v]].push_back(v);
    int clock = 0;
    std::vector<std::pair<VertexId, std::size_t>> stack{{t.root, 0}};
    depth[t.root] = 0;
    tin[t.root] = clock++;
    preorder.push_back(t.root);
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < children[v].size()) {
        const VertexId c = children[v][i++];
        depth[c] = depth[v] + 1;
        tin[c] = clock++;
        preorder.push_back(c);
        stack.emplace_back(c, 0);
      } else {
        tout[v] = clock;
        stack.pop_back();
      }
    }
  }

  // True iff u is an ancestor of v or u == v.
  bool in_subtree(VertexId v, VertexId u) const {
    return tin[v] <= tin[u] && tin[u] < tout[v];
  }
};

struct TreeClassification {
  std::vector<VertexId> leaves;
  std::vector<VertexId> links;
  std::vector<VertexId> branches;
  // Maximal paths of link vertices, each listed from top to bottom.
  std::vector<std::vector<VertexId>> link_paths;
  std::vector<VertexId> first_vertices;
};

// Partitions V(T) by out-degree 0 / 1 / >=2 and extracts the maximal link
// paths. Throws std::logic_error if the counting facts
// |branches| <= |leaves| - 1 and |link paths| <= 2|leaves| - 1 fail, which
// would mean t is not a tree.
inline TreeClassification classify(const OutTree& t) {
  TreeClassification c;
  const auto deg = t.out_degrees();
  const TreeIndex idx(t);
  for (VertexId v : idx.preorder) {
    if (deg[v] == 0) {
      c.leaves.push_back(v);
    } else if (deg[v] == 1) {
      c.links.push_back(v);
      const bool starts = (v == t.root) || deg[t.parent[v]] != 1;
      if (starts) {
        std::vector<VertexId> path{v};
        VertexId u = idx.children[v][0];
        while (deg[u] == 1) {
          path.push_back(u);
          u = idx.children[u][0];
        }
        c.first_vertices.push_back(v);
        c.link_paths.push_back(std::move(path));
      }
    } else {
      c.branches.push_back(v);
    }
  }
  std::sort(c.leaves.begin(), c.leaves.end());
  std::sort(c.links.begin(), c.links.end());
  std::sort(c.branches.begin(), c.branches.end());
  const auto leaves = static_cast<long>(c.leaves.size());
  if (static_cast<long>(c.branches.size()) > leaves - 1 ||
      static_cast<long>(c.link_paths.size()) > 2 * leaves - 1) {
    throw std::logic_error("leaf/branch/link-path counting facts violated");
  }
  return c;
}

// BFS arborescence from root in adjacency order.
inline OutBranching initial_out_branching(const Digraph& d, VertexId root) {
  const int n = d.num_vertices();
  OutTree t(n, root);
  std::vector<VertexId> queue{root};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (VertexId w : d.out_neighbors(queue[i])) {
      if (!t.member[w]) {
        t.attach(w, queue[i]);
        queue.push_back(w);
      }
    }
  }
  if (static_cast<int>(queue.size()) != n) {
    throw Error(ErrorKind::kPrecondition,
                "vertex unreachable from root " + std::to_string(root));
  }
  return t;
}

// One first-improvement 1-arc exchange. Tree arcs are scanned in increasing
// (tail, head) order and, for each, replacement arcs in increasing order.
// Replacing f = (p(v), v) by a non-tree arc x = (a, b) gives an out-branching
// only when b == v and a is outside the subtree of v, or when b is the root
// and a lies inside the subtree of v (then v becomes the new root). Either way
// p(v) loses a child and a gains one.
inline std::optional<OutBranching> one_arc_exchange_step(const Digraph& d,
                                                         const OutBranching& t) {
  const auto deg = t.out_degrees();
  const TreeIndex idx(t);
  const VertexId r = t.root;
  std::vector<Arc> candidates;
  for (const Arc& f : t.arcs()) {
    const VertexId pv = f.tail, v = f.head;
    if (deg[pv] != 1) continue;  // p(v) would not become a leaf
    candidates.clear();
    for (VertexId a : d.in_neighbors(v)) {
      if (a != pv && !idx.in_subtree(v, a)) candidates.push_back({a, v});
    }
    for (VertexId a : d.in_neighbors(r)) {
      if (idx.in_subtree(v, a)) candidates.push_back({a, r});
    }
    std::sort(candidates.begin(), candidates.end());
    for (const Arc& x : candidates) {
      if (deg[x.tail] == 0) continue;  // a would stop being a leaf: no gain
      OutBranching next = t;
      if (x.head == v) {
        next.parent[v] = x.tail;
      } else {
        next.parent[v] = kNoVertex;
        next.root = v;
        next.parent[r] = x.tail;
      }
      return next;
    }
  }
  return std::nullopt;
}

// Iterates one_arc_exchange_step to a fixed point. Each step gains at least
// one leaf, so there are at most n - 1 rounds.
inline OutBranching make_1ae_optimal(const Digraph& d, OutBranching t,
                                     int* rounds_out = nullptr) {
  int rounds = 0;
  while (auto next = one_arc_exchange_step(d, t)) {
    t = std::move(*next);
    ++rounds;
    if (rounds > d.num_vertices()) throw std::logic_error("local search did not converge");
  }
  if (rounds_out) *rounds_out = rounds;
  return t;
}

namespace detail {

// Leaf count of the arc set if it forms an out-branching of all n vertices.
inline std::optional<int> branching_leaves(int n, std::span<const Arc> arcs) {
  if (static_cast<int>(arcs.size()) != n - 1) return std::nullopt;
  std::vector<int> indeg(n, 0), outdeg(n, 0);
  for (const Arc& a : arcs) {
    ++indeg[a.head];
    ++outdeg[a.tail];
  }
  VertexId root = kNoVertex;
  for (VertexId v = 0; v < n; ++v) {
    if (indeg[v] == 0) {
      if (root != kNoVertex) return std::nullopt;
      root = v;
    } else if (indeg[v] > 1) {
      return std::nullopt;
    }
  }
  if (root == kNoVertex) return std::nullopt;
  std::vector<std::vector<VertexId>> adj(n);
  for (const Arc& a : arcs) adj[a.tail].push_back(a.head);
  std::vector<VertexId> queue{root};
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (VertexId w : adj[queue[i]]) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  if (static_cast<int>(queue.size()) != n) return std::nullopt;
  return static_cast<int>(std::count(outdeg.begin(), outdeg.end(), 0));
}

template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

// Exhaustive l-arc-exchange optimality test (l in {1, 2}). Exchanges of every
// size s <= l are tried. Cost grows like (|A| * n)^l; meant for small n.
inline bool is_l_ae_optimal(const Digraph& d, const OutBranching& t, int l) {
  if (l < 1 || l > 2) throw Error(ErrorKind::kInvalidArgument, "l must be 1 or 2");
  const int n = d.num_vertices();
  const int current = leaf_count(t);
  const auto tree_arcs = t.arcs();
  std::vector<Arc> other;
  std::set_difference(d.arcs().begin(), d.arcs().end(), tree_arcs.begin(),
                      tree_arcs.end(), std::back_inserter(other));
  std::vector<Arc> trial;
  bool optimal = true;
  for (int s = 1; s <= l && optimal; ++s) {
    detail::for_each_combination(
        static_cast<int>(tree_arcs.size()), s, [&](const std::vector<int>& drop) {
          if (!optimal) return;
          detail::for_each_combination(
              static_cast<int>(other.size()), s, [&](const std::vector<int>& add) {
                if (!optimal) return;
                trial.clear();
                std::size_t k = 0;
                for (std::size_t i = 0; i < tree_arcs.size(); ++i) {
                  if (k < drop.size() && drop[k] == static_cast<int>(i)) {
                    ++k;
                    continue;
                  }
                  trial.push_back(tree_arcs[i]);
                }
                for (int i : add) trial.push_back(other[i]);
                auto leaves = detail::branching_leaves(n, trial);
                if (leaves && *leaves > current) optimal = false;
              });
        });
  }
  return optimal;
}

struct ArcPatternViolation {
  char clause = '?';  // 'a', 'b' or 'c'
  Arc arc;
  VertexId witness = kNoVertex;  // x for clause (c)

  std::string describe() const {
    std::string s = "clause (" + std::string(1, clause) + "): arc " +
                    std::to_string(arc.tail) + "->" + std::to_string(arc.head);
    if (witness != kNoVertex) s += " (x = " + std::to_string(witness) + ")";
    return s;
  }
};

// Checks the three forbidden-arc patterns that every 1-AE optimal
// out-branching avoids. Distances are tree depths.
//  (a) u, v non-leaf siblings, p(v) a link, non-tree arc u->v;
//  (b) u, v non-leaf, u a proper ancestor of v, p(v) a link, non-tree u->v;
//  (c) arc v->root from a non-leaf v whose root path contains some x != root
//      with p(x) a link.
inline std::vector<ArcPatternViolation> forbidden_arc_patterns(const Digraph& d,
                                                  const OutBranching& t) {
  std::vector<ArcPatternViolation> out;
  const auto deg = t.out_degrees();
  const TreeIndex idx(t);
  const VertexId r = t.root;
  for (const Arc& e : d.arcs()) {
    const VertexId u = e.tail, v = e.head;
    if (v == r) {
      if (deg[u] == 0) continue;
      for (VertexId x = u; x != r; x = t.parent[x]) {
        if (deg[t.parent[x]] == 1) {
          out.push_back({'c', e, x});
          break;
        }
      }
      continue;
    }
    if (t.parent[v] == u) continue;  // tree arc
    if (deg[u] == 0 || deg[v] == 0 || deg[t.parent[v]] != 1) continue;
    if (idx.in_subtree(u, v)) {
      out.push_back({'b', e, kNoVertex});
    } else if (!idx.in_subtree(v, u)) {
      out.push_back({'a', e, kNoVertex});
    }
  }
  return out;
}

// Grows t into an out-branching of d containing every arc of t by BFS from
// the tree's vertices. Attaching a new vertex under a leaf keeps the leaf
// count and under a non-leaf raises it, so the count never drops.
inline OutBranching extend_out_tree(const Digraph& d, const OutTree& t) {
  OutTree out = t;
  const TreeIndex idx(t);
  std::vector<VertexId> queue = idx.preorder;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (VertexId w : d.out_neighbors(queue[i])) {
      if (!out.member[w]) {
        out.attach(w, queue[i]);
        queue.push_back(w);
      }
    }
  }
  if (!out.is_spanning()) {
    throw Error(ErrorKind::kPrecondition, "some vertex is unreachable from the tree root");
  }
  return out;
}

}  // namespace mlob
