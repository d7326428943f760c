#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlob/branching.hpp"
#include "mlob/decomp.hpp"
#include "mlob/digraph.hpp"
#include "mlob/error.hpp"
#include "mlob/oracle.hpp"

namespace mlob {

struct NiceStep {
  enum class Kind { kIntroduce, kForget };
  Kind kind;
  VertexId vertex;

  friend bool operator==(const NiceStep&, const NiceStep&) = default;
};

// Introduce/forget sequence in which consecutive bags differ by one vertex.
// Between two bags the vertices leaving are forgotten first, then the new
// ones introduced (both in increasing id order); everything left is
// forgotten at the end.
inline std::vector<NiceStep> nice_decomposition(const PathDecomposition& pd) {
  std::vector<NiceStep> steps;
  std::vector<VertexId> current;
  for (auto bag : pd.bags) {
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    std::vector<VertexId> gone, fresh;
    std::set_difference(current.begin(), current.end(), bag.begin(), bag.end(),
                        std::back_inserter(gone));
    std::set_difference(bag.begin(), bag.end(), current.begin(), current.end(),
                        std::back_inserter(fresh));
    for (VertexId v : gone) steps.push_back({NiceStep::Kind::kForget, v});
    for (VertexId v : fresh) steps.push_back({NiceStep::Kind::kIntroduce, v});
    current = std::move(bag);
  }
  for (VertexId v : current) steps.push_back({NiceStep::Kind::kForget, v});
  return steps;
}

enum class DpMode { kSpanning, kTree };

struct DpResult {
  int value = 0;
  std::optional<OutTree> witness;
  int width = -1;
  std::size_t max_states = 0;
};

namespace detail {

inline double bell_number(int n) {
  std::vector<std::vector<double>> tri{{1.0}};
  for (int i = 1; i <= n; ++i) {
    std::vector<double> row{tri.back().back()};
    for (double x : tri.back()) row.push_back(row.back() + x);
    tri.push_back(std::move(row));
  }
  return tri[n][0];
}

// Slot status: parent status * 2 + has_child, or kExcluded.
enum : std::uint8_t { kRoot = 0, kParented = 1, kPending = 2 };
inline constexpr std::uint8_t kExcluded = 6;
inline constexpr std::uint8_t kNoBlock = 31;
inline constexpr std::uint8_t kFreshBlock = 30;
inline constexpr std::uint8_t kRootPlaced = 1, kSealed = 2;
inline constexpr int kMaxBag = 21;

inline std::uint8_t parent_status(std::uint8_t s) { return s / 2; }
inline bool has_child(std::uint8_t s) { return s % 2; }

// Byte 0 holds the flags; byte 1 + i describes bag slot i as
// status << 5 | block. Slots follow the bag's introduction order.
struct DpState {
  std::array<std::uint8_t, 24> bytes{};

  std::uint8_t flags() const { return bytes[0]; }
  std::uint8_t status(int i) const { return bytes[1 + i] >> 5; }
  std::uint8_t block(int i) const { return bytes[1 + i] & 31; }
  void set(int i, std::uint8_t status, std::uint8_t block) {
    bytes[1 + i] = static_cast<std::uint8_t>(status << 5 | block);
  }
  void erase(int i, int size) {
    for (int j = i; j + 1 < size; ++j) bytes[1 + j] = bytes[2 + j];
    bytes[size] = 0;
  }
  void canonicalize(int size) {
    std::uint8_t map[32];
    std::fill(std::begin(map), std::end(map), kNoBlock);
    std::uint8_t next = 0;
    for (int i = 0; i < size; ++i) {
      const std::uint8_t b = block(i);
      if (b == kNoBlock) continue;
      if (map[b] == kNoBlock) map[b] = next++;
      set(i, status(i), map[b]);
    }
  }

  friend bool operator==(const DpState&, const DpState&) = default;
};

struct DpStateHash {
  std::size_t operator()(const DpState& s) const {
    std::uint64_t w[3];
    std::memcpy(w, s.bytes.data(), sizeof w);
    std::uint64_t h = w[0] * 0x9E3779B97F4A7C15ULL;
    h ^= (w[1] + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2)) * 0xBF58476D1CE4E5B9ULL;
    h ^= (w[2] + 0x94D049BB133111EBULL + (h << 6) + (h >> 2)) * 0x94D049BB133111EBULL;
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

struct DpStep {
  enum class Kind { kIntroduce, kArc, kForget } kind;
  VertexId vertex = kNoVertex;  // introduce / forget
  Arc arc;                      // arc step
};

// Back-pointer record: decision 1 means "root chosen" on introduce steps and
// "arc used" on arc steps.
struct DpEntry {
  int value;
  std::int32_t prev;
  std::uint8_t decision;
};

}  // namespace detail

// Exact maximum number of leaves over out-branchings (kSpanning; 0 if none
// exists) or over all out-trees (kTree) by dynamic programming along a path
// decomposition of UG(D). The state per bag records for each bag vertex its
// parent status (root / parented / pending, or excluded in tree mode) and
// whether it has a child, plus the partition of bag vertices into fragments
// of the partial forest. An arc u->v joins the forest only when v is pending
// and u, v lie in different fragments. Leaves are counted when forgotten.
inline DpResult dp_max_leaves(const Digraph& d, const PathDecomposition& pd, DpMode mode,
                              int width_guard = 20) {
  using namespace detail;
  const int n = d.num_vertices();
  DpResult res;
  if (n == 0) return res;
  const UGraph g = underlying_graph(d);
  if (auto check = verify_path_decomposition(g, pd); !check)
    throw Error(ErrorKind::kInvalidArgument, "invalid path decomposition: " + check.violation);
  res.width = pd.width();
  width_guard = std::min(width_guard, kMaxBag - 1);
  if (res.width > width_guard)
    throw Error(ErrorKind::kWidthGuard, "decomposition width " + std::to_string(res.width) +
                                            " exceeds guard " + std::to_string(width_guard));

  std::vector<char> may_root(n, mode == DpMode::kTree ? 1 : 0);
  if (mode == DpMode::kSpanning) {
    auto roots = has_out_branching(d);
    if (!roots) return res;
    for (VertexId r : *roots) may_root[r] = 1;
  }

  // Expand the nice decomposition into introduce / arc / forget steps.
  std::vector<DpStep> steps;
  {
    std::vector<char> in_bag(n, 0);
    for (const NiceStep& s : nice_decomposition(pd)) {
      if (s.kind == NiceStep::Kind::kForget) {
        in_bag[s.vertex] = 0;
        steps.push_back({DpStep::Kind::kForget, s.vertex, {}});
        continue;
      }
      steps.push_back({DpStep::Kind::kIntroduce, s.vertex, {}});
      std::vector<Arc> arcs;
      for (VertexId w : d.out_neighbors(s.vertex))
        if (in_bag[w]) arcs.push_back({s.vertex, w});
      for (VertexId w : d.in_neighbors(s.vertex))
        if (in_bag[w]) arcs.push_back({w, s.vertex});
      std::sort(arcs.begin(), arcs.end());
      for (const Arc& a : arcs) steps.push_back({DpStep::Kind::kArc, kNoVertex, a});
      in_bag[s.vertex] = 1;
    }
  }
  std::vector<int> introduces_after(steps.size() + 1, 0);
  for (int i = static_cast<int>(steps.size()) - 1; i >= 0; --i)
    introduces_after[i] =
        introduces_after[i + 1] + (steps[i].kind == DpStep::Kind::kIntroduce);

  std::vector<std::vector<DpEntry>> history;
  history.reserve(steps.size());
  std::vector<DpState> states{DpState{}};
  std::vector<DpEntry> layer{{0, -1, 0}};
  std::vector<VertexId> bag;
  std::unordered_map<DpState, int, DpStateHash> index;

  for (std::size_t si = 0; si < steps.size(); ++si) {
    const DpStep& step = steps[si];
    const int size = static_cast<int>(bag.size());
    const int next_size = size + (step.kind == DpStep::Kind::kIntroduce) -
                          (step.kind == DpStep::Kind::kForget);
    index.clear();
    index.reserve(states.size() * 2);
    std::vector<DpState> next_states;
    std::vector<DpEntry> next;
    auto offer = [&](DpState& s, int value, int prev, std::uint8_t decision) {
      s.canonicalize(next_size);
      auto [it, inserted] = index.try_emplace(s, static_cast<int>(next.size()));
      if (inserted) {
        next_states.push_back(s);
        next.push_back({value, prev, decision});
      } else if (next[it->second].value < value) {
        next[it->second] = {value, prev, decision};
      }
    };

    int pos_a = -1, pos_b = -1;
    if (step.kind == DpStep::Kind::kForget) {
      pos_a = static_cast<int>(std::find(bag.begin(), bag.end(), step.vertex) - bag.begin());
    } else if (step.kind == DpStep::Kind::kArc) {
      pos_a = static_cast<int>(std::find(bag.begin(), bag.end(), step.arc.tail) - bag.begin());
      pos_b = static_cast<int>(std::find(bag.begin(), bag.end(), step.arc.head) - bag.begin());
    }

    for (int i = 0; i < static_cast<int>(states.size()); ++i) {
      const DpState& cur = states[i];
      const int value = layer[i].value;
      switch (step.kind) {
        case DpStep::Kind::kIntroduce: {
          const VertexId x = step.vertex;
          if (mode == DpMode::kTree) {
            DpState s = cur;
            s.set(size, kExcluded, kNoBlock);
            offer(s, value, i, 0);
          }
          if (cur.flags() & kSealed) break;
          {
            DpState s = cur;
            s.set(size, kPending * 2, kFreshBlock);
            offer(s, value, i, 0);
          }
          if (!(cur.flags() & kRootPlaced) && may_root[x]) {
            DpState s = cur;
            s.bytes[0] |= kRootPlaced;
            s.set(size, kRoot * 2, kFreshBlock);
            offer(s, value, i, 1);
          }
          break;
        }
        case DpStep::Kind::kArc: {
          DpState skip = cur;
          offer(skip, value, i, 0);
          const std::uint8_t su = cur.status(pos_a), sv = cur.status(pos_b);
          if (su == kExcluded || sv == kExcluded) break;
          if (parent_status(sv) != kPending) break;
          const std::uint8_t bu = cur.block(pos_a), bv = cur.block(pos_b);
          if (bu == bv) break;
          DpState s = cur;
          for (int j = 0; j < size; ++j)
            if (s.block(j) == bv) s.set(j, s.status(j), bu);
          s.set(pos_b, static_cast<std::uint8_t>(kParented * 2 + has_child(sv)), bu);
          s.set(pos_a, static_cast<std::uint8_t>(parent_status(su) * 2 + 1), bu);
          offer(s, value, i, 1);
          break;
        }
        case DpStep::Kind::kForget: {
          const std::uint8_t sx = cur.status(pos_a);
          const std::uint8_t bx = cur.block(pos_a);
          DpState s = cur;
          s.erase(pos_a, size);
          if (sx == kExcluded) {
            offer(s, value, i, 0);
            break;
          }
          if (parent_status(sx) == kPending) break;
          bool shared = false, others = false;
          for (int j = 0; j < size; ++j) {
            if (j == pos_a) continue;
            shared |= cur.block(j) == bx;
            others |= cur.status(j) != kExcluded;
          }
          if (!shared) {
            // The fragment is complete: it must be the whole tree.
            if (others) break;
            if (mode == DpMode::kSpanning && introduces_after[si + 1] > 0) break;
            s.bytes[0] |= kSealed;
          }
          offer(s, value + (has_child(sx) ? 0 : 1), i, 0);
          break;
        }
      }
    }

    if (step.kind == DpStep::Kind::kIntroduce) bag.push_back(step.vertex);
    if (step.kind == DpStep::Kind::kForget) bag.erase(bag.begin() + pos_a);

    const double guard = bell_number(next_size) *
                         std::pow(mode == DpMode::kTree ? 7.0 : 6.0, next_size) *
                         (mode == DpMode::kTree ? 4.0 : 2.0);
    if (static_cast<double>(next.size()) > guard)
      throw std::logic_error("dynamic programming state count exceeds its bound");
    res.max_states = std::max(res.max_states, next.size());

    history.push_back(std::move(layer));
    states = std::move(next_states);
    layer = std::move(next);
    if (layer.empty()) return res;
  }

  // Bag is empty now; accept sealed states only.
  int best = -1;
  for (int i = 0; i < static_cast<int>(states.size()); ++i) {
    if ((states[i].flags() & kSealed) && (best < 0 || layer[i].value > layer[best].value))
      best = i;
  }
  if (best < 0) return res;
  res.value = layer[best].value;

  std::vector<Arc> arcs;
  VertexId root = kNoVertex;
  int at = best;
  const std::vector<DpEntry>* cur_layer = &layer;
  for (int si = static_cast<int>(steps.size()) - 1; si >= 0; --si) {
    const DpEntry& e = (*cur_layer)[at];
    if (e.decision == 1) {
      if (steps[si].kind == DpStep::Kind::kArc) arcs.push_back(steps[si].arc);
      if (steps[si].kind == DpStep::Kind::kIntroduce) root = steps[si].vertex;
    }
    at = e.prev;
    cur_layer = &history[si];
  }
  std::sort(arcs.begin(), arcs.end());
  std::optional<OutTree> witness;
  if (arcs.empty()) {
    witness = OutTree(n, root);
  } else {
    witness = out_tree_from_arcs(n, arcs);
  }
  if (!witness || witness->root != root || leaf_count(*witness) != res.value ||
      (mode == DpMode::kSpanning && !witness->is_spanning()))
    throw std::logic_error("dynamic programming witness reconstruction failed");
  res.witness = std::move(witness);
  return res;
}

// Sufficient condition for membership in the family where the best
// out-branching is as good as the best out-tree: whenever a strong component
// R sends an arc into another component Q, every vertex of Q has an
// in-neighbour in R.
inline bool is_family_L(const Digraph& d) {
  const SccDecomposition s = scc(d);
  for (const Arc& ca : s.condensation.arcs()) {
    const int r = ca.tail, q = ca.head;
    for (VertexId v : s.components[q]) {
      bool found = false;
      for (VertexId u : d.in_neighbors(v)) {
        if (s.component_id[u] == r) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

enum class DecompositionSource { kAcyclic, kBeta, kGreedy, kOracle };

inline const char* to_string(DecompositionSource s) {
  switch (s) {
    case DecompositionSource::kAcyclic: return "acyclic";
    case DecompositionSource::kBeta: return "beta";
    case DecompositionSource::kGreedy: return "greedy";
    case DecompositionSource::kOracle: return "oracle";
  }
  return "?";
}

enum class Outcome { kFound, kExact, kNoOutBranching };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kFound: return "found";
    case Outcome::kExact: return "exact";
    case Outcome::kNoOutBranching: return "no-out-branching";
  }
  return "?";
}

struct SolveResult {
  Outcome outcome = Outcome::kNoOutBranching;
  int k = 0;
  // Leaves of the witness for kFound, the exact optimum for kExact.
  int value = 0;
  std::optional<OutTree> witness;
  int local_search_leaves = 0;
  // Decomposition actually used by the dynamic program.
  int decomposition_width = -1;
  std::optional<DecompositionSource> decomposition_source;
  // Class-specific builder output, when one ran.
  int builder_width = -1;
  std::optional<DecompositionSource> builder;
  int layers = 0;  // beta layer count t, 0 otherwise

  bool yes() const {
    return outcome == Outcome::kFound || (outcome == Outcome::kExact && value >= k);
  }
};

struct SolveOptions {
  OracleLimits limits;
  int width_guard = 20;
  // Verify 1-AE optimality and the forbidden-arc patterns for n <= 15.
  bool check = false;
};

namespace detail {

inline SolveResult solve_spanning(const Digraph& d, int k, const SolveOptions& opts,
                                  bool assume_family_l) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be at least 1");
  const int n = d.num_vertices();
  SolveResult res;
  res.k = k;
  const auto roots = has_out_branching(d);
  if (!roots) return res;

  OutBranching t = make_1ae_optimal(d, initial_out_branching(d, roots->front()));
  if (opts.check && n <= 15) {
    if (!is_l_ae_optimal(d, t, 1)) throw std::logic_error("local search result not 1-AE optimal");
    if (!forbidden_arc_patterns(d, t).empty()) throw std::logic_error("forbidden arc pattern present");
  }
  res.local_search_leaves = leaf_count(t);
  if (res.local_search_leaves >= k) {
    res.outcome = Outcome::kFound;
    res.value = res.local_search_leaves;
    res.witness = std::move(t);
    return res;
  }

  struct Candidate {
    PathDecomposition pd;
    DecompositionSource source;
  };
  std::vector<Candidate> candidates;
  const UGraph g = underlying_graph(d);
  if (is_acyclic(d)) {
    auto a = acyclic_decomposition(d, t, opts.check);
    res.builder = DecompositionSource::kAcyclic;
    res.builder_width = a.decomposition.width();
    candidates.push_back({std::move(a.decomposition), DecompositionSource::kAcyclic});
  } else if (assume_family_l || is_strongly_connected(d) || is_family_L(d)) {
    auto b = strongly_connected_decomposition(d, t, opts.check);
    res.builder = DecompositionSource::kBeta;
    res.builder_width = b.decomposition.width();
    res.layers = b.layers;
    candidates.push_back({std::move(b.decomposition), DecompositionSource::kBeta});
  } else if (n > opts.limits.max_n_pathwidth) {
    throw Error(ErrorKind::kUnsupportedClass,
                "digraph is neither acyclic, strongly connected nor in the supported "
                "family, and too large for the exact pathwidth oracle");
  }
  if (res.builder) {
    candidates.push_back({ordering_to_decomposition(g, greedy_ordering(g)),
                          DecompositionSource::kGreedy});
  }
  if (n <= opts.limits.max_n_pathwidth) {
    candidates.push_back({ordering_to_decomposition(g, exact_pathwidth(g, opts.limits).ordering),
                          DecompositionSource::kOracle});
  }
  const Candidate* pick = &candidates.front();
  for (const Candidate& c : candidates)
    if (c.pd.width() < pick->pd.width()) pick = &c;

  DpResult dp = dp_max_leaves(d, pick->pd, DpMode::kSpanning, opts.width_guard);
  res.outcome = Outcome::kExact;
  res.value = dp.value;
  res.witness = std::move(dp.witness);
  res.decomposition_width = dp.width;
  res.decomposition_source = pick->source;
  return res;
}

}  // namespace detail

// Does D have an out-branching with at least k leaves? Local search first;
// if it falls short, an exact dynamic program over a path decomposition
// decides.
inline SolveResult solve_k_dmlob(const Digraph& d, int k, const SolveOptions& opts = {}) {
  return detail::solve_spanning(d, k, opts, false);
}

// Does D have an out-tree with at least k leaves? Maximises the spanning
// problem over the digraphs induced by the reachability sets, one
// representative per strong component.
inline SolveResult solve_k_dmlot(const Digraph& d, int k, const SolveOptions& opts = {}) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "k must be at least 1");
  SolveResult best;
  best.k = k;
  if (d.num_vertices() == 0) {
    best.outcome = Outcome::kExact;
    return best;
  }
  const SccDecomposition s = scc(d);
  bool have = false;
  for (const auto& comp : s.components) {
    const auto reach = reachable_from(d, comp.front());
    const InducedSubdigraph sub = induced_subdigraph(d, reach);
    SolveResult r = detail::solve_spanning(sub.graph, k, opts, true);
    if (r.witness) {
      OutTree mapped(d.num_vertices(), sub.to_original[r.witness->root]);
      for (VertexId v = 0; v < sub.graph.num_vertices(); ++v) {
        if (r.witness->member[v] && v != r.witness->root)
          mapped.attach(sub.to_original[v], sub.to_original[r.witness->parent[v]]);
      }
      r.witness = std::move(mapped);
    }
    best.local_search_leaves = std::max(best.local_search_leaves, r.local_search_leaves);
    if (r.outcome == Outcome::kFound) {
      r.local_search_leaves = best.local_search_leaves;
      return r;
    }
    const int width = std::max(best.decomposition_width, r.decomposition_width);
    const int layers = std::max(best.layers, r.layers);
    if (!have || r.value > best.value) {
      const int ls = best.local_search_leaves;
      best = std::move(r);
      best.local_search_leaves = ls;
      have = true;
    }
    best.decomposition_width = width;
    best.layers = layers;
  }
  best.outcome = Outcome::kExact;
  return best;
}

}  // namespace mlob
