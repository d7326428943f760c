#include <gtest/gtest.h>

#include "helpers.hpp"
#include "mlob/branching.hpp"
#include "mlob/gen.hpp"

using namespace mlob;
using namespace mlob::testing;

namespace {

OutTree tree_from(int n, std::vector<Arc> arcs) {
  auto t = out_tree_from_arcs(n, arcs);
  EXPECT_TRUE(t);
  return *t;
}

OutTree hamiltonian_path_tree(int n) {
  std::vector<Arc> arcs;
  for (VertexId v = 0; v + 1 < n; ++v) arcs.push_back({v, v + 1});
  return tree_from(n, arcs);
}

}  // namespace

TEST(OutTree, FromArcsNamesCycle) {
  std::string why;
  EXPECT_FALSE(out_tree_from_arcs(4, std::vector<Arc>{{0, 1}, {1, 2}, {2, 1}}, &why));
  EXPECT_FALSE(why.empty());
  why.clear();
  EXPECT_FALSE(out_tree_from_arcs(3, std::vector<Arc>{{0, 1}, {1, 2}, {2, 0}}, &why));
  EXPECT_NE(why.find("cycle"), std::string::npos);
  EXPECT_FALSE(out_tree_from_arcs(3, std::vector<Arc>{{0, 2}, {1, 2}}, &why));
}

TEST(OutTree, ValidityChecks) {
  const Digraph d = directed_path(3);
  const OutTree t = hamiltonian_path_tree(3);
  EXPECT_TRUE(is_out_branching(d, t));
  OutTree partial(3, 0);
  partial.attach(1, 0);
  EXPECT_TRUE(is_out_tree(d, partial));
  EXPECT_FALSE(is_out_branching(d, partial));
  OutTree wrong(3, 0);
  wrong.attach(2, 0);
  EXPECT_FALSE(is_out_tree(d, wrong));
}

TEST(Classify, OutStar) {
  const OutTree t = tree_from(4, {{0, 1}, {0, 2}, {0, 3}});
  const auto c = classify(t);
  EXPECT_EQ(c.leaves, (std::vector<VertexId>{1, 2, 3}));
  EXPECT_EQ(c.branches, (std::vector<VertexId>{0}));
  EXPECT_TRUE(c.links.empty());
  EXPECT_TRUE(c.link_paths.empty());
}

TEST(Classify, PathOfLengthFour) {
  const auto c = classify(hamiltonian_path_tree(5));
  EXPECT_EQ(c.leaves, (std::vector<VertexId>{4}));
  EXPECT_TRUE(c.branches.empty());
  ASSERT_EQ(c.link_paths.size(), 1u);
  EXPECT_EQ(c.link_paths[0], (std::vector<VertexId>{0, 1, 2, 3}));
  EXPECT_EQ(c.first_vertices, (std::vector<VertexId>{0}));
}

TEST(Classify, FactsOnLocalOptima) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Digraph d = gen_random_strongly_connected(8 + seed % 5, 2, Seed{seed});
    const auto t = make_1ae_optimal(d, initial_out_branching(d, 0));
    const auto c = classify(t);
    EXPECT_LE(c.branches.size() + 1, c.leaves.size());
    EXPECT_LE(c.link_paths.size() + 1, 2 * c.leaves.size());
  }
}

TEST(InitialBranching, Examples) {
  const auto star = initial_out_branching(complete_digraph(4), 0);
  EXPECT_EQ(leaf_count(star), 3);
  const auto path = initial_out_branching(directed_cycle(6), 0);
  EXPECT_EQ(path, hamiltonian_path_tree(6));
  EXPECT_EQ(leaf_count(path), 1);
  const Digraph d = gen_random_strongly_connected(40, 2, Seed{5});
  const auto t = initial_out_branching(d, 7);
  EXPECT_TRUE(t.is_spanning());
  EXPECT_EQ(t.size(), 40);
  EXPECT_THROW(initial_out_branching(directed_path(3), 1), Error);
}

TEST(ExchangeStep, Examples) {
  const Digraph k4 = complete_digraph(4);
  EXPECT_FALSE(one_arc_exchange_step(k4, initial_out_branching(k4, 0)));
  const auto next = one_arc_exchange_step(k4, hamiltonian_path_tree(4));
  ASSERT_TRUE(next);
  EXPECT_TRUE(is_out_branching(k4, *next));
  EXPECT_GT(leaf_count(*next), 1);
}

TEST(ExchangeStep, StrictlyImproves) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Digraph d = gen_random_strongly_connected(10, 2, Seed{seed});
    OutBranching t = initial_out_branching(d, static_cast<VertexId>(seed % 10));
    while (auto next = one_arc_exchange_step(d, t)) {
      ASSERT_TRUE(is_out_branching(d, *next));
      ASSERT_GT(leaf_count(*next), leaf_count(t));
      t = *next;
    }
  }
}

TEST(LocalSearch, Examples) {
  for (int n = 2; n <= 7; ++n) {
    const Digraph kn = complete_digraph(n);
    EXPECT_EQ(leaf_count(make_1ae_optimal(kn, hamiltonian_path_tree(n))), n - 1);
  }
  const Digraph c = directed_cycle(7);
  EXPECT_EQ(make_1ae_optimal(c, hamiltonian_path_tree(7)), hamiltonian_path_tree(7));
}

TEST(LocalSearch, FixedPointIsOneExchangeOptimal) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const int n = 5 + static_cast<int>(seed % 8);
    const Digraph d = gen_random_strongly_connected(n, 1 + seed % 3, Seed{seed});
    int rounds = 0;
    const auto t = make_1ae_optimal(d, initial_out_branching(d, 0), &rounds);
    EXPECT_LE(rounds, n - 1);
    EXPECT_TRUE(is_l_ae_optimal(d, t, 1)) << "seed " << seed;
    EXPECT_TRUE(forbidden_arc_patterns(d, t).empty()) << "seed " << seed;
  }
}

TEST(LocalOptimality, Examples) {
  const Digraph k4 = complete_digraph(4);
  EXPECT_TRUE(is_l_ae_optimal(k4, initial_out_branching(k4, 0), 1));
  EXPECT_FALSE(is_l_ae_optimal(k4, hamiltonian_path_tree(4), 1));
  EXPECT_TRUE(is_l_ae_optimal(k4, initial_out_branching(k4, 0), 2));
  EXPECT_THROW(is_l_ae_optimal(k4, hamiltonian_path_tree(4), 3), Error);
}

TEST(ForbiddenPatterns, TwoCycleIsClean) {
  const Digraph d(2, {{0, 1}, {1, 0}});
  EXPECT_TRUE(forbidden_arc_patterns(d, tree_from(2, {{0, 1}})).empty());
}

TEST(ForbiddenPatterns, ClauseC) {
  // r=0 -> a=1 -> b=2 -> c=3 -> 4 with the extra arc c -> r. c must be a
  // non-leaf for the clause to apply, hence vertex 4.
  const Digraph d(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 0}});
  const auto v = forbidden_arc_patterns(d, hamiltonian_path_tree(5));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].clause, 'c');
  EXPECT_EQ(v[0].arc, (Arc{3, 0}));
  EXPECT_FALSE(v[0].describe().empty());
  // The exchange that the pattern signals does improve the branching.
  EXPECT_TRUE(one_arc_exchange_step(d, hamiltonian_path_tree(5)));
}

TEST(ForbiddenPatterns, ClausesAB) {
  // Siblings 1 and 2 under branch vertex 0, each a link with one child.
  const OutTree t = tree_from(7, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 6}});
  const Digraph da(7, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 6}, {3, 4}});
  auto v = forbidden_arc_patterns(da, t);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].clause, 'a');
  const Digraph db(7, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 6}, {0, 4}});
  v = forbidden_arc_patterns(db, t);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].clause, 'b');
}

TEST(ExtendOutTree, Examples) {
  const Digraph k5 = complete_digraph(5);
  const auto full = initial_out_branching(k5, 0);
  EXPECT_EQ(extend_out_tree(k5, full), full);
  const auto grown = extend_out_tree(k5, OutTree(5, 2));
  EXPECT_TRUE(is_out_branching(k5, grown));
  EXPECT_GE(leaf_count(grown), 1);
  EXPECT_THROW(extend_out_tree(directed_path(3), OutTree(3, 1)), Error);
}

TEST(ExtendOutTree, LeafMonotone) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Digraph d = gen_random_strongly_connected(15, 2, Seed{seed});
    const auto full = initial_out_branching(d, 0);
    const TreeIndex idx(full);
    // Keep a prefix of the preorder: always a sub-out-tree.
    const int keep = 1 + static_cast<int>(seed % 14);
    OutTree part(15, 0);
    for (int i = 1; i < keep; ++i) part.attach(idx.preorder[i], full.parent[idx.preorder[i]]);
    const auto ext = extend_out_tree(d, part);
    EXPECT_TRUE(is_out_branching(d, ext));
    EXPECT_GE(leaf_count(ext), leaf_count(part));
    for (const Arc& a : part.arcs()) EXPECT_EQ(ext.parent[a.head], a.tail);
  }
}
