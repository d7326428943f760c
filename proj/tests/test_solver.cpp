#include <gtest/gtest.h>

#include "helpers.hpp"
#include "mlob/gen.hpp"
#include "mlob/oracle.hpp"
#include "mlob/solver.hpp"

using namespace mlob;
using namespace mlob::testing;

namespace {

PathDecomposition optimal_pd(const Digraph& d) {
  const UGraph g = underlying_graph(d);
  return ordering_to_decomposition(g, exact_pathwidth(g).ordering);
}

std::vector<NiceStep::Kind> kinds(const std::vector<NiceStep>& steps) {
  std::vector<NiceStep::Kind> out;
  for (const auto& s : steps) out.push_back(s.kind);
  return out;
}

}  // namespace

TEST(NiceDecomposition, Examples) {
  using K = NiceStep::Kind;
  const auto steps = nice_decomposition({{{0, 1}, {1, 2}}});
  EXPECT_EQ(steps, (std::vector<NiceStep>{{K::kIntroduce, 0},
                                          {K::kIntroduce, 1},
                                          {K::kForget, 0},
                                          {K::kIntroduce, 2},
                                          {K::kForget, 1},
                                          {K::kForget, 2}}));
  EXPECT_EQ(kinds(nice_decomposition({{{0}}})), (std::vector<K>{K::kIntroduce, K::kForget}));
}

TEST(NiceDecomposition, ReconstructedBagsAreValid) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Digraph d = gen_random_digraph(10, 0.2, Seed{seed});
    const UGraph g = underlying_graph(d);
    const auto pd = ordering_to_decomposition(g, greedy_ordering(g));
    PathDecomposition rebuilt;
    std::vector<VertexId> bag;
    for (const NiceStep& s : nice_decomposition(pd)) {
      if (s.kind == NiceStep::Kind::kIntroduce) {
        bag.push_back(s.vertex);
      } else {
        bag.erase(std::find(bag.begin(), bag.end(), s.vertex));
      }
      rebuilt.bags.push_back(bag);
    }
    EXPECT_TRUE(bag.empty());
    EXPECT_TRUE(verify_path_decomposition(g, rebuilt));
    EXPECT_EQ(rebuilt.width(), pd.width());
  }
}

TEST(Dp, Examples) {
  const Digraph c5 = directed_cycle(5);
  EXPECT_EQ(dp_max_leaves(c5, optimal_pd(c5), DpMode::kSpanning).value, 1);
  const UGraph g5 = underlying_graph(c5);
  EXPECT_EQ(dp_max_leaves(c5, ordering_to_decomposition(g5, {4, 2, 0, 1, 3}), DpMode::kSpanning).value, 1);
  const Digraph k5 = complete_digraph(5);
  const auto r = dp_max_leaves(k5, optimal_pd(k5), DpMode::kSpanning);
  EXPECT_EQ(r.value, 4);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(is_out_branching(k5, *r.witness));
  EXPECT_EQ(dp_max_leaves(Digraph(4, {{0, 1}, {2, 3}}), {{{0, 1}, {2, 3}}}, DpMode::kSpanning).value, 0);
  EXPECT_EQ(dp_max_leaves(Digraph(4, {{0, 1}, {0, 2}}), {{{0, 1, 2}, {3}}}, DpMode::kTree).value, 2);
  EXPECT_EQ(dp_max_leaves(Digraph(1, {}), {{{0}}}, DpMode::kSpanning).value, 1);
}

TEST(Dp, Errors) {
  const Digraph c4 = directed_cycle(4);
  EXPECT_THROW(dp_max_leaves(c4, {{{0, 1}, {2, 3}}}, DpMode::kSpanning), Error);
  try {
    dp_max_leaves(c4, optimal_pd(c4), DpMode::kSpanning, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kWidthGuard);
  }
}

TEST(Dp, MatchesOracleBothModes) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const int n = 1 + static_cast<int>(seed % 9);
    const Digraph d = gen_random_digraph(n, 0.1 + 0.05 * (seed % 5), Seed{seed});
    const auto pd = optimal_pd(d);
    const auto s = dp_max_leaves(d, pd, DpMode::kSpanning);
    const auto t = dp_max_leaves(d, pd, DpMode::kTree);
    ASSERT_EQ(s.value, exact_max_leaf_out_branching(d).value) << "seed " << seed;
    ASSERT_EQ(t.value, exact_max_leaf_out_tree(d).value) << "seed " << seed;
    if (s.value > 0) {
      ASSERT_TRUE(s.witness);
      EXPECT_TRUE(is_out_branching(d, *s.witness));
      EXPECT_EQ(leaf_count(*s.witness), s.value);
    }
    ASSERT_TRUE(t.witness);
    EXPECT_TRUE(is_out_tree(d, *t.witness));
    EXPECT_EQ(leaf_count(*t.witness), t.value);
  }
}

TEST(Dp, IndependentOfDecomposition) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Digraph d = gen_random_strongly_connected(25, 2, Seed{seed});
    const UGraph g = underlying_graph(d);
    const auto greedy = ordering_to_decomposition(g, greedy_ordering(g));
    if (greedy.width() > 6) continue;
    std::vector<VertexId> reversed = greedy_ordering(g);
    std::reverse(reversed.begin(), reversed.end());
    const auto back = ordering_to_decomposition(g, reversed);
    EXPECT_EQ(dp_max_leaves(d, greedy, DpMode::kSpanning).value,
              dp_max_leaves(d, back, DpMode::kSpanning).value);
  }
}

// Frozen values: l_s(H_t) for t = 6..9, computed once by the DP and
// stable across decompositions.
TEST(Dp, HtFrozen) {
  const int expected[] = {19, 22, 26, 29};
  for (int t = 6; t <= 9; ++t) {
    const Digraph d = gen_ht(t);
    const UGraph g = underlying_graph(d);
    const auto pd = ordering_to_decomposition(g, greedy_ordering(g));
    EXPECT_EQ(dp_max_leaves(d, pd, DpMode::kSpanning).value, expected[t - 6]) << "t " << t;
  }
}

TEST(FamilyL, Examples) {
  EXPECT_TRUE(is_family_L(directed_cycle(5)));
  EXPECT_TRUE(is_family_L(out_star(4)));
  EXPECT_TRUE(is_family_L(Digraph(3, {{0, 1}, {0, 2}, {1, 2}})));
  EXPECT_TRUE(is_family_L(Digraph(3, {{0, 1}, {1, 2}})));
  // {0} sends an arc into the component {1, 2}, but only 1 receives it.
  EXPECT_FALSE(is_family_L(Digraph(3, {{0, 1}, {1, 2}, {2, 1}})));
}

TEST(SolveBranching, Examples) {
  const auto found = solve_k_dmlob(complete_digraph(6), 5);
  EXPECT_EQ(found.outcome, Outcome::kFound);
  EXPECT_EQ(found.value, 5);
  ASSERT_TRUE(found.witness);
  EXPECT_EQ(leaf_count(*found.witness), 5);

  const auto cycle = solve_k_dmlob(directed_cycle(7), 2);
  EXPECT_EQ(cycle.outcome, Outcome::kExact);
  EXPECT_EQ(cycle.value, 1);
  EXPECT_FALSE(cycle.yes());

  EXPECT_EQ(solve_k_dmlob(Digraph(4, {{0, 1}, {2, 3}}), 1).outcome, Outcome::kNoOutBranching);
  EXPECT_THROW(solve_k_dmlob(directed_cycle(3), 0), Error);
}

TEST(SolveBranching, HtAboveLocalSearch) {
  const Digraph d = gen_ht(6);
  const auto first = solve_k_dmlob(d, 1);
  ASSERT_EQ(first.outcome, Outcome::kFound);
  const auto r = solve_k_dmlob(d, first.local_search_leaves + 1);
  EXPECT_EQ(r.outcome, Outcome::kExact);
  EXPECT_EQ(r.value, 19);
  EXPECT_GE(r.value, 6);
  EXPECT_LE(r.value, 36);
  EXPECT_EQ(r.builder, DecompositionSource::kBeta);
}

TEST(SolveBranching, UnsupportedClass) {
  // Two strong components {0..6} and {7..13}; 0 -> 7 only, so vertex 8 of the
  // second component has no in-neighbour in the first.
  std::vector<Arc> arcs;
  for (int v = 0; v < 7; ++v) {
    arcs.push_back({v, (v + 1) % 7});
    arcs.push_back({7 + v, 7 + (v + 1) % 7});
  }
  arcs.push_back({0, 7});
  const Digraph d(14, arcs);
  try {
    solve_k_dmlob(d, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedClass);
  }
}

TEST(SolveBranching, AgreesWithOracleAndMonotone) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const Digraph d = gen_random_digraph(n, 0.15 + 0.05 * (seed % 4), Seed{seed});
    const int truth = exact_max_leaf_out_branching(d).value;
    bool previous = true;
    for (int k = 1; k <= n; ++k) {
      const auto r = solve_k_dmlob(d, k, {.check = true});
      if (truth == 0) {
        EXPECT_EQ(r.outcome, Outcome::kNoOutBranching);
        continue;
      }
      EXPECT_EQ(r.yes(), truth >= k) << "seed " << seed << " k " << k;
      if (r.outcome == Outcome::kExact) EXPECT_EQ(r.value, truth);
      if (r.outcome == Outcome::kFound) EXPECT_GE(leaf_count(*r.witness), k);
      ASSERT_TRUE(r.witness);
      EXPECT_TRUE(is_out_branching(d, *r.witness));
      EXPECT_TRUE(previous || !r.yes());
      previous = r.yes();
    }
  }
}

TEST(SolveTree, Examples) {
  // Out-stars 0 -> {1, 2, 3} and 4 -> {5, 6}.
  const Digraph d(7, {{0, 1}, {0, 2}, {0, 3}, {4, 5}, {4, 6}});
  const auto r = solve_k_dmlot(d, 4);
  EXPECT_EQ(r.outcome, Outcome::kExact);
  EXPECT_EQ(r.value, 3);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(is_out_tree(d, *r.witness));
  EXPECT_EQ(solve_k_dmlob(d, 1).outcome, Outcome::kNoOutBranching);
  EXPECT_TRUE(solve_k_dmlot(d, 3).yes());
}

TEST(SolveTree, StronglyConnectedEqualsBranching) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 3 + static_cast<int>(seed % 7);
    const Digraph d = gen_random_strongly_connected(n, 1 + seed % 2, Seed{seed});
    const int k = n;
    EXPECT_EQ(solve_k_dmlot(d, k).value, solve_k_dmlob(d, k).value);
  }
}

TEST(SolveTree, MatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 9);
    const Digraph d = seed % 2 ? gen_random_dag_single_source(
                                     n, std::min<long>(n * (n - 1) / 2, n - 1 + seed % 3), Seed{seed})
                               : gen_random_digraph(n, 0.15, Seed{seed});
    const int truth = exact_max_leaf_out_tree(d).value;
    const auto r = solve_k_dmlot(d, n + 1);
    EXPECT_EQ(r.value, truth) << "seed " << seed;
    ASSERT_TRUE(r.witness);
    EXPECT_TRUE(is_out_tree(d, *r.witness));
    EXPECT_EQ(leaf_count(*r.witness), truth);
  }
}
