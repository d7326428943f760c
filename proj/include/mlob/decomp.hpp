#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlob/branching.hpp"
#include "mlob/digraph.hpp"
#include "mlob/error.hpp"

namespace mlob {

// Permutation (v_1, ..., v_n) of the vertices.
using VertexOrdering = std::vector<VertexId>;

struct PathDecomposition {
  std::vector<std::vector<VertexId>> bags;

  int width() const {
    std::size_t widest = 0;
    for (const auto& b : bags) widest = std::max(widest, b.size());
    return static_cast<int>(widest) - 1;
  }
};

struct DecompositionCheck {
  bool valid = true;
  std::string violation;

  explicit operator bool() const { return valid; }
};

inline DecompositionCheck verify_path_decomposition(const UGraph& g,
                                                    const PathDecomposition& pd) {
  const int n = g.num_vertices();
  std::vector<int> first(n, -1), last(n, -1), count(n, 0);
  for (int i = 0; i < static_cast<int>(pd.bags.size()); ++i) {
    std::vector<VertexId> bag = pd.bags[i];
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    for (VertexId v : bag) {
      if (v < 0 || v >= n)
        return {false, "bag " + std::to_string(i) + " holds unknown vertex " +
                           std::to_string(v)};
      if (first[v] < 0) first[v] = i;
      last[v] = i;
      ++count[v];
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (first[v] < 0) return {false, "condition 1: vertex " + std::to_string(v) + " in no bag"};
  }
  for (VertexId v = 0; v < n; ++v) {
    if (count[v] != last[v] - first[v] + 1)
      return {false, "condition 3: bags holding vertex " + std::to_string(v) +
                         " are not contiguous"};
  }
  // With contiguous occurrence intervals an edge is covered iff the two
  // intervals intersect.
  for (const auto& [u, v] : g.edges()) {
    if (last[u] < first[v] || last[v] < first[u])
      return {false, "condition 2: edge {" + std::to_string(u) + "," + std::to_string(v) +
                         "} in no bag"};
  }
  return {};
}

namespace detail {

inline void check_permutation(int n, const VertexOrdering& order) {
  if (static_cast<int>(order.size()) != n)
    throw Error(ErrorKind::kInvalidArgument, "ordering length differs from vertex count");
  std::vector<char> seen(n, 0);
  for (VertexId v : order) {
    if (v < 0 || v >= n || seen[v])
      throw Error(ErrorKind::kInvalidArgument, "ordering is not a permutation");
    seen[v] = 1;
  }
}

// For each position i, the largest position of a neighbour of order[i]
// (or i itself when it has none later).
inline std::vector<int> last_neighbour_position(const UGraph& g, const VertexOrdering& order) {
  const int n = g.num_vertices();
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  std::vector<int> last(n);
  for (int i = 0; i < n; ++i) {
    int l = i;
    for (VertexId w : g.neighbors(order[i])) l = std::max(l, pos[w]);
    last[i] = l;
  }
  return last;
}

}  // namespace detail

// vs(G, order) = max over prefixes V_i of the number of prefix vertices with a
// neighbour outside the prefix.
inline int vertex_separation(const UGraph& g, const VertexOrdering& order) {
  const int n = g.num_vertices();
  detail::check_permutation(n, order);
  const auto last = detail::last_neighbour_position(g, order);
  // Position j contributes to prefixes j .. last[j]-1.
  std::vector<int> diff(n + 1, 0);
  for (int j = 0; j < n; ++j) {
    if (last[j] > j) {
      ++diff[j];
      --diff[last[j]];
    }
  }
  int best = 0, running = 0;
  for (int i = 0; i < n; ++i) {
    running += diff[i];
    best = std::max(best, running);
  }
  return best;
}

// Bag i = {v_i} plus the boundary of the prefix before it. Valid for every
// ordering, with width at most vs(G, order).
inline PathDecomposition ordering_to_decomposition(const UGraph& g,
                                                   const VertexOrdering& order) {
  const int n = g.num_vertices();
  detail::check_permutation(n, order);
  const auto last = detail::last_neighbour_position(g, order);
  PathDecomposition pd;
  std::vector<int> active;  // positions j < i with last[j] >= i
  for (int i = 0; i < n; ++i) {
    std::erase_if(active, [&](int j) { return last[j] < i; });
    std::vector<VertexId> bag{order[i]};
    for (int j : active) bag.push_back(order[j]);
    std::sort(bag.begin(), bag.end());
    pd.bags.push_back(std::move(bag));
    active.push_back(i);
  }
  return pd;
}

// Greedy vertex-separation heuristic: repeatedly place the vertex that keeps
// the prefix boundary smallest (ties: fewest unplaced neighbours, then id).
// Tries every start vertex for n <= 128, otherwise a minimum-degree start.
inline VertexOrdering greedy_ordering(const UGraph& g) {
  const int n = g.num_vertices();
  if (n == 0) return {};
  auto run = [&](VertexId start) {
    std::vector<int> unplaced(n);
    for (VertexId v = 0; v < n; ++v) unplaced[v] = g.degree(v);
    std::vector<char> placed(n, 0);
    VertexOrdering order;
    int boundary = 0, worst = 0;
    auto place = [&](VertexId v) {
      int delta = unplaced[v] > 0 ? 1 : 0;
      for (VertexId u : g.neighbors(v)) {
        --unplaced[u];
        if (placed[u] && unplaced[u] == 0) --delta;
      }
      placed[v] = 1;
      boundary += delta;
      worst = std::max(worst, boundary);
      order.push_back(v);
    };
    place(start);
    while (static_cast<int>(order.size()) < n) {
      VertexId pick = kNoVertex;
      int pick_delta = 0;
      for (VertexId v = 0; v < n; ++v) {
        if (placed[v]) continue;
        int delta = unplaced[v] > 0 ? 1 : 0;
        for (VertexId u : g.neighbors(v))
          if (placed[u] && unplaced[u] == 1) --delta;
        if (pick == kNoVertex || delta < pick_delta ||
            (delta == pick_delta && unplaced[v] < unplaced[pick])) {
          pick = v;
          pick_delta = delta;
        }
      }
      place(pick);
    }
    return std::make_pair(worst, order);
  };
  std::vector<VertexId> starts;
  if (n <= 128) {
    starts.resize(n);
    std::iota(starts.begin(), starts.end(), 0);
  } else {
    VertexId s = 0;
    for (VertexId v = 1; v < n; ++v)
      if (g.degree(v) < g.degree(s)) s = v;
    starts.push_back(s);
  }
  int best_width = n + 1;
  VertexOrdering best;
  for (VertexId s : starts) {
    auto [w, order] = run(s);
    if (w < best_width) {
      best_width = w;
      best = std::move(order);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Acyclic digraphs.

struct AcyclicDecomposition {
  PathDecomposition decomposition;
  int leaves = 0;
  // Leaves, branch vertices and first vertices of link paths; in every bag.
  std::vector<VertexId> separator;
  // Link paths with their first vertex removed (empty paths dropped).
  std::vector<std::vector<VertexId>> paths;
};

// For an acyclic digraph with a single source and a 1-AE optimal branching t
// with p leaves: the link vertices that do not start a link path form
// vertex-disjoint paths with no other arcs between them, so width-1 bags along
// each path plus the separator in every bag give width <= 4p - 1.
inline AcyclicDecomposition acyclic_decomposition(const Digraph& d, const OutBranching& t,
                                                  bool check_local_optimality = false) {
  if (!is_acyclic(d)) throw Error(ErrorKind::kPrecondition, "digraph has a directed cycle");
  int sources = 0;
  for (VertexId v = 0; v < d.num_vertices(); ++v) sources += d.in_degree(v) == 0;
  if (sources != 1) throw Error(ErrorKind::kPrecondition, "digraph needs exactly one source");
  if (!is_out_branching(d, t))
    throw Error(ErrorKind::kPrecondition, "tree is not an out-branching of the digraph");
  if (check_local_optimality && d.num_vertices() <= 15 && !is_l_ae_optimal(d, t, 1))
    throw Error(ErrorKind::kPrecondition, "branching is not 1-AE optimal");

  AcyclicDecomposition out;
  const TreeClassification c = classify(t);
  out.leaves = static_cast<int>(c.leaves.size());
  out.separator = c.leaves;
  out.separator.insert(out.separator.end(), c.branches.begin(), c.branches.end());
  out.separator.insert(out.separator.end(), c.first_vertices.begin(), c.first_vertices.end());
  std::sort(out.separator.begin(), out.separator.end());

  for (const auto& path : c.link_paths) {
    if (path.size() < 2) continue;
    out.paths.emplace_back(path.begin() + 1, path.end());
  }
  auto with_sep = [&](std::vector<VertexId> bag) {
    bag.insert(bag.end(), out.separator.begin(), out.separator.end());
    std::sort(bag.begin(), bag.end());
    return bag;
  };
  for (const auto& q : out.paths) {
    if (q.size() == 1) {
      out.decomposition.bags.push_back(with_sep({q[0]}));
      continue;
    }
    for (std::size_t i = 0; i + 1 < q.size(); ++i)
      out.decomposition.bags.push_back(with_sep({q[i], q[i + 1]}));
  }
  if (out.decomposition.bags.empty()) out.decomposition.bags.push_back(with_sep({}));
  return out;
}

// ---------------------------------------------------------------------------
// Centroids and the recursive leaf-balanced splitting.

namespace detail {

// Centroid of a rooted tree given by parent indices (-1 at the root) and a
// preorder: walk from the root into the child whose subtree carries more than
// half of the total weight.
template <typename Weight>
int centroid_of(const std::vector<int>& parent, const std::vector<int>& preorder,
                const std::vector<std::vector<int>>& children,
                const std::vector<Weight>& weight) {
  std::vector<Weight> sub(weight);
  for (auto it = preorder.rbegin(); it != preorder.rend(); ++it)
    if (parent[*it] >= 0) sub[parent[*it]] += sub[*it];
  const Weight total = sub[preorder.front()];
  int v = preorder.front();
  while (true) {
    int heavy = -1;
    for (int c : children[v])
      if (sub[c] * 2 > total) heavy = c;
    if (heavy < 0) return v;
    v = heavy;
  }
}

}  // namespace detail

// A vertex whose removal leaves undirected components each of weight at most
// half of the total. weights are indexed by host vertex id.
inline VertexId centroid(const OutTree& t, std::span<const double> weights) {
  const TreeIndex idx(t);
  const int n = t.host_size();
  std::vector<int> parent(n, -1);
  std::vector<std::vector<int>> children(n);
  std::vector<double> w(n, 0.0);
  double total = 0;
  for (VertexId v : idx.preorder) {
    if (weights[v] < 0) throw Error(ErrorKind::kInvalidArgument, "negative weight");
    w[v] = weights[v];
    total += w[v];
    if (v != t.root) parent[v] = t.parent[v];
    for (VertexId c : idx.children[v]) children[v].push_back(c);
  }
  if (!(total > 0)) throw Error(ErrorKind::kPrecondition, "total weight must be positive");
  std::vector<int> preorder(idx.preorder.begin(), idx.preorder.end());
  return detail::centroid_of(parent, preorder, children, w);
}

struct TaggedVertex {
  VertexId original = kNoVertex;
  int copy_index = 0;  // 0 for the original, >= 1 for duplicates

  friend bool operator==(const TaggedVertex&, const TaggedVertex&) = default;
};

struct BetaNode {
  std::vector<TaggedVertex> vertices;  // local id -> tagged vertex
  std::vector<int> parent;             // local parent id, -1 at the root
  int layer = 1;
  int leaves = 0;
  int parent_node = -1;
  std::array<int, 2> children{-1, -1};
  // Split vertex of an internal node: children[0] holds it, children[1] a copy.
  std::optional<TaggedVertex> split;
  std::optional<TaggedVertex> split_copy;

  bool is_leaf() const { return children[0] < 0; }

  int root() const {
    for (int i = 0; i < static_cast<int>(parent.size()); ++i)
      if (parent[i] < 0) return i;
    return -1;
  }

  // Vertices in root-to-end order; meaningful for one-leaf nodes (paths).
  std::vector<TaggedVertex> path() const {
    const int n = static_cast<int>(vertices.size());
    std::vector<int> next(n, -1);
    for (int i = 0; i < n; ++i)
      if (parent[i] >= 0) next[parent[i]] = i;
    std::vector<TaggedVertex> out;
    for (int v = root(); v >= 0; v = next[v]) out.push_back(vertices[v]);
    return out;
  }
};

struct BetaDecompositionTree {
  std::vector<BetaNode> nodes;  // nodes[0] is the whole branching
  int layers = 1;
  int copies = 0;

  std::vector<int> leaf_nodes() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
      if (nodes[i].is_leaf()) out.push_back(i);
    return out;
  }
};

namespace detail {

struct LocalTree {
  std::vector<std::vector<int>> children;
  std::vector<int> preorder;
  std::vector<char> leaf;
  int leaves = 0;
};

inline LocalTree analyse(const BetaNode& node) {
  const int n = static_cast<int>(node.vertices.size());
  LocalTree lt;
  lt.children.resize(n);
  int root = -1;
  for (int i = 0; i < n; ++i) {
    if (node.parent[i] < 0) root = i;
    else lt.children[node.parent[i]].push_back(i);
  }
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    lt.preorder.push_back(v);
    for (auto it = lt.children[v].rbegin(); it != lt.children[v].rend(); ++it)
      stack.push_back(*it);
  }
  lt.leaf.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (lt.children[i].empty()) {
      lt.leaf[i] = 1;
      ++lt.leaves;
    }
  }
  return lt;
}

struct Component {
  std::vector<int> members;  // local ids in the parent node
  int leaves = 0;
  VertexId min_original = 0;
  bool upper = false;  // contains the node's root
};

}  // namespace detail

// Recursively splits t at leaf-weight centroids until every piece is a
// directed path. The centroid v is kept in the first child and replaced by a
// fresh copy v' in the second. Components of T - v are sorted by
// non-increasing leaf count (ties: smallest original id); j is the first
// prefix reaching lambda/2 + 1 leaves; the first child takes j components if
// 4 l_j <= lambda + 2 and one component otherwise.
inline BetaDecompositionTree beta_decompose(const Digraph& d, const OutBranching& t) {
  if (!is_out_branching(d, t))
    throw Error(ErrorKind::kPrecondition, "tree is not an out-branching of the digraph");
  BetaDecompositionTree tree;
  std::vector<int> next_copy(d.num_vertices(), 1);

  {
    BetaNode root;
    const TreeIndex idx(t);
    std::vector<int> local(d.num_vertices(), -1);
    for (VertexId v : idx.preorder) {
      local[v] = static_cast<int>(root.vertices.size());
      root.vertices.push_back({v, 0});
    }
    for (VertexId v : idx.preorder)
      root.parent.push_back(v == t.root ? -1 : local[t.parent[v]]);
    tree.nodes.push_back(std::move(root));
  }

  for (std::size_t cur = 0; cur < tree.nodes.size(); ++cur) {
    const detail::LocalTree lt = detail::analyse(tree.nodes[cur]);
    tree.nodes[cur].leaves = lt.leaves;
    tree.layers = std::max(tree.layers, tree.nodes[cur].layer);
    const int lambda = lt.leaves;
    if (lambda <= 1) continue;

    const BetaNode& node = tree.nodes[cur];
    const int n = static_cast<int>(node.vertices.size());
    std::vector<int> weight(n);
    for (int i = 0; i < n; ++i) weight[i] = lt.leaf[i];
    const int v = detail::centroid_of(node.parent, lt.preorder, lt.children, weight);

    // Components of T - v.
    std::vector<detail::Component> comps;
    std::vector<char> in_sub(n, 0);
    for (int c : lt.children[v]) {
      detail::Component comp;
      std::vector<int> stack{c};
      comp.min_original = node.vertices[c].original;
      while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        in_sub[x] = 1;
        comp.members.push_back(x);
        comp.leaves += lt.leaf[x];
        comp.min_original = std::min(comp.min_original, node.vertices[x].original);
        for (int y : lt.children[x]) stack.push_back(y);
      }
      comps.push_back(std::move(comp));
    }
    if (node.parent[v] >= 0) {
      // Everything outside the subtree of v.
      std::vector<char> below(n, 0);
      below[v] = 1;
      for (int x : lt.preorder)
        if (node.parent[x] >= 0 && below[node.parent[x]]) below[x] = 1;
      detail::Component up;
      up.upper = true;
      up.min_original = d.num_vertices();
      for (int x = 0; x < n; ++x) {
        if (below[x]) continue;
        up.members.push_back(x);
        up.leaves += lt.leaf[x];
        up.min_original = std::min(up.min_original, node.vertices[x].original);
      }
      // The in-neighbour of v turns into a leaf when v was its only child.
      if (lt.children[node.parent[v]].size() == 1) ++up.leaves;
      comps.push_back(std::move(up));
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
      if (a.leaves != b.leaves) return a.leaves > b.leaves;
      return a.min_original < b.min_original;
    });

    const int s = static_cast<int>(comps.size());
    int j = s, acc = 0;
    for (int i = 0; i < s; ++i) {
      acc += comps[i].leaves;
      if (2 * acc >= lambda + 2) {
        j = i + 1;
        break;
      }
    }
    int take = (4 * comps[j - 1].leaves <= lambda + 2) ? j : 1;
    // Both children must receive at least one component.
    take = std::min(take, s - 1);

    const TaggedVertex split = node.vertices[v];
    const TaggedVertex copy{split.original, next_copy[split.original]++};
    ++tree.copies;

    auto build_child = [&](int from, int to, TaggedVertex centre) {
      BetaNode child;
      child.layer = node.layer + 1;
      child.parent_node = static_cast<int>(cur);
      std::vector<int> local(n, -1);
      std::vector<int> members{v};
      for (int i = from; i < to; ++i)
        members.insert(members.end(), comps[i].members.begin(), comps[i].members.end());
      std::sort(members.begin(), members.end());
      for (int x : members) {
        local[x] = static_cast<int>(child.vertices.size());
        child.vertices.push_back(x == v ? centre : node.vertices[x]);
      }
      for (int x : members) {
        const int p = node.parent[x];
        child.parent.push_back(p >= 0 && local[p] >= 0 ? local[p] : -1);
      }
      return child;
    };
    BetaNode first = build_child(0, take, split);
    BetaNode second = build_child(take, s, copy);
    const int first_id = static_cast<int>(tree.nodes.size());
    tree.nodes[cur].split = split;
    tree.nodes[cur].split_copy = copy;
    tree.nodes[cur].children = {first_id, first_id + 1};
    tree.nodes.push_back(std::move(first));
    tree.nodes.push_back(std::move(second));
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Strongly connected digraphs.

struct BetaNodeReport {
  int node = 0;
  int layer = 1;
  int width = 0;
  int separator = 0;  // |Y| for internal nodes, |W ∩ V(Q)| for paths
  double bound = 0;   // 2(t - j + 2.5)k + (t - j)
};

struct StronglyConnectedDecomposition {
  PathDecomposition decomposition;
  int leaves = 0;  // p
  int k = 0;       // p + 1
  int layers = 0;  // t
  int copies = 0;
  // Largest number of prefix vertices with an in-neighbour in the suffix,
  // over all path nodes and prefixes, in the stripped path digraphs.
  int max_backward_prefix = 0;
  bool layer_bounds_hold = true;
  std::vector<BetaNodeReport> nodes;

  double root_bound() const { return 2.0 * (layers + 2.5) * k + layers; }
};

// Builds a path decomposition of UG(D) bottom-up over the beta decomposition
// of a 1-AE optimal branching with p leaves, using k = p + 1.
//  * Path node Q: W = (leaves ∪ branches ∪ first link vertices) ∩ V(Q) goes
//    into every bag; the remaining vertices are ordered along Q.
//  * Internal node: the two child sequences are concatenated and the
//    cross out-neighbour set Y plus the split vertex goes into every bag.
// The split vertex is added so that projected copies stay contiguous.
inline StronglyConnectedDecomposition strongly_connected_decomposition(
    const Digraph& d, const OutBranching& t, bool check_local_optimality = false) {
  if (!has_out_branching(d))
    throw Error(ErrorKind::kPrecondition, "digraph has no out-branching");
  if (!is_out_branching(d, t))
    throw Error(ErrorKind::kPrecondition, "tree is not an out-branching of the digraph");
  if (check_local_optimality && d.num_vertices() <= 15 && !is_l_ae_optimal(d, t, 1))
    throw Error(ErrorKind::kPrecondition, "branching is not 1-AE optimal");

  const int n = d.num_vertices();
  StronglyConnectedDecomposition out;
  const TreeClassification cls = classify(t);
  out.leaves = static_cast<int>(cls.leaves.size());
  out.k = out.leaves + 1;
  std::vector<char> in_w(n, 0);
  for (VertexId v : cls.leaves) in_w[v] = 1;
  for (VertexId v : cls.branches) in_w[v] = 1;
  for (VertexId v : cls.first_vertices) in_w[v] = 1;

  const BetaDecompositionTree beta = beta_decompose(d, t);
  out.layers = beta.layers;
  out.copies = beta.copies;
  out.nodes.resize(beta.nodes.size());

  using Bags = std::vector<std::vector<VertexId>>;
  auto add_to_all = [](Bags& bags, const std::vector<VertexId>& extra) {
    for (auto& b : bags) {
      b.insert(b.end(), extra.begin(), extra.end());
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
    }
  };

  std::vector<int> pos(n, -1);
  std::vector<char> side(n, 0);
  std::vector<Bags> built(beta.nodes.size());
  // Children always have larger indices than their parent.
  for (int id = static_cast<int>(beta.nodes.size()) - 1; id >= 0; --id) {
    const BetaNode& node = beta.nodes[id];
    BetaNodeReport& rep = out.nodes[id];
    rep.node = id;
    rep.layer = node.layer;
    Bags bags;
    if (node.is_leaf()) {
      std::vector<VertexId> w, rest;
      for (const TaggedVertex& tv : node.path())
        (in_w[tv.original] ? w : rest).push_back(tv.original);
      rep.separator = static_cast<int>(w.size());
      const int q = static_cast<int>(rest.size());
      for (int i = 0; i < q; ++i) pos[rest[i]] = i;
      std::vector<int> last(q);
      int backward_worst = 0;
      for (int i = 0; i < q; ++i) {
        last[i] = i;
        for (VertexId u : d.out_neighbors(rest[i]))
          if (pos[u] >= 0) last[i] = std::max(last[i], pos[u]);
        for (VertexId u : d.in_neighbors(rest[i]))
          if (pos[u] >= 0) last[i] = std::max(last[i], pos[u]);
      }
      // Prefix V_j (positions 0..j): count i <= j with an in-neighbour in the
      // suffix, i.e. at some position > j.
      std::vector<int> latest_back(q, -1);
      for (int i = 0; i < q; ++i) {
        for (VertexId u : d.in_neighbors(rest[i]))
          if (pos[u] > i) latest_back[i] = std::max(latest_back[i], pos[u]);
      }
      for (int j = 0; j < q; ++j) {
        int cnt = 0;
        for (int i = 0; i <= j; ++i) cnt += latest_back[i] > j;
        backward_worst = std::max(backward_worst, cnt);
      }
      out.max_backward_prefix = std::max(out.max_backward_prefix, backward_worst);
      std::vector<int> active;
      for (int i = 0; i < q; ++i) {
        std::erase_if(active, [&](int x) { return last[x] < i; });
        std::vector<VertexId> bag{rest[i]};
        for (int x : active) bag.push_back(rest[x]);
        bags.push_back(std::move(bag));
        active.push_back(i);
      }
      for (VertexId v : rest) pos[v] = -1;
      if (bags.empty()) bags.push_back({});
      add_to_all(bags, w);
    } else {
      const BetaNode& a = beta.nodes[node.children[0]];
      const BetaNode& b = beta.nodes[node.children[1]];
      const VertexId split = node.split->original;
      for (const auto& tv : a.vertices) side[tv.original] |= 1;
      for (const auto& tv : b.vertices) side[tv.original] |= 2;
      std::vector<VertexId> y;
      auto cross = [&](const BetaNode& from, int other) {
        for (const auto& tv : from.vertices) {
          if (tv.original == split) continue;
          for (VertexId u : d.out_neighbors(tv.original))
            if (u != split && side[u] == other) y.push_back(u);
        }
      };
      cross(a, 2);
      cross(b, 1);
      std::sort(y.begin(), y.end());
      y.erase(std::unique(y.begin(), y.end()), y.end());
      rep.separator = static_cast<int>(y.size());
      for (const auto& tv : a.vertices) side[tv.original] = 0;
      for (const auto& tv : b.vertices) side[tv.original] = 0;
      bags = std::move(built[node.children[0]]);
      auto& tail = built[node.children[1]];
      bags.insert(bags.end(), std::make_move_iterator(tail.begin()),
                  std::make_move_iterator(tail.end()));
      built[node.children[0]].clear();
      tail.clear();
      y.push_back(split);
      add_to_all(bags, y);
    }
    std::size_t widest = 0;
    for (const auto& bag : bags) widest = std::max(widest, bag.size());
    rep.width = static_cast<int>(widest) - 1;
    built[id] = std::move(bags);
  }

  for (BetaNodeReport& rep : out.nodes) {
    const int gap = out.layers - rep.layer;
    rep.bound = 2.0 * (gap + 2.5) * out.k + gap;
    if (!(rep.width < rep.bound)) out.layer_bounds_hold = false;
  }
  out.decomposition.bags = std::move(built[0]);
  return out;
}

}  // namespace mlob
