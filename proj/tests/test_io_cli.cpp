#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "mlob/cli.hpp"

using namespace mlob;
using namespace mlob::testing;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("mlob_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string file(const std::string& name, const std::string& content = "") const {
    const auto p = (path_ / name).string();
    if (!content.empty()) std::ofstream(p) << content;
    return p;
  }

 private:
  fs::path path_;
};

std::string instance_text(const Digraph& d) {
  std::ostringstream ss;
  write_instance(ss, d);
  return ss.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(InstanceFile, RoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Digraph d = gen_random_strongly_connected(30, 2, Seed{seed});
    std::istringstream in(instance_text(d));
    const auto p = read_instance(in);
    EXPECT_EQ(p.graph, d);
    EXPECT_TRUE(p.warnings.empty());
  }
}

TEST(InstanceFile, CommentsAndDuplicates) {
  std::istringstream in("# a comment\n3 3\n0 1\n\n# inner\n1 2\n0 1\n");
  const auto p = read_instance(in);
  EXPECT_EQ(p.graph.num_arcs(), 2);
  EXPECT_EQ(p.warnings.size(), 1u);
}

TEST(InstanceFile, ErrorsCiteLines) {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_instance(in);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kParse);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message("3 2\n0 1\n1 1\n"), "line 3: self-loop 1");
  EXPECT_EQ(message("3 1\n0 3\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message("3 2\n0 1\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message("3\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(message("3 1\n0 x\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message("2 1\n0 1\n1 0\n").rfind("line 3:", 0), 0u);
  EXPECT_EQ(message("").rfind("line 0:", 0), 0u);
}

TEST(WitnessFile, RoundTrip) {
  const Digraph d = complete_digraph(5);
  const auto t = initial_out_branching(d, 2);
  std::ostringstream out;
  write_witness(out, t);
  std::istringstream in(out.str());
  const auto w = read_witness(in);
  ASSERT_TRUE(w.tree);
  EXPECT_EQ(*w.tree, t);
  std::istringstream single("# root 0\n1 0\n");
  EXPECT_TRUE(read_witness(single).tree);
}

TEST(DecompositionFile, RoundTrip) {
  const PathDecomposition pd{{{0, 1}, {}, {1, 2, 3}}};
  std::ostringstream out;
  write_decomposition(out, pd);
  std::istringstream in(out.str());
  EXPECT_EQ(read_decomposition(in).bags, pd.bags);
  std::istringstream bad("bags 1\n2 0\n");
  EXPECT_THROW(read_decomposition(bad), Error);
}

TEST(Digest, StableAndDistinct) {
  EXPECT_EQ(instance_digest(directed_cycle(5)), instance_digest(directed_cycle(5)));
  EXPECT_NE(instance_digest(directed_cycle(5)), instance_digest(directed_cycle(6)));
  EXPECT_EQ(instance_digest(directed_cycle(5)).size(), 16u);
}

TEST(CliSolve, ExitCodes) {
  TempDir dir;
  const auto cycle = dir.file("c5.txt", instance_text(directed_cycle(5)));
  const auto two = dir.file("two.txt", instance_text(Digraph(4, {{0, 1}, {2, 3}})));
  const auto broken = dir.file("bad.txt", "5 1\n0 9\n");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_solve({.input = cycle, .k = 1}, out, err), 0);
  EXPECT_NE(out.str().find("root 0"), std::string::npos);
  EXPECT_EQ(cli::cmd_solve({.input = cycle, .k = 2}, out, err), 1);
  EXPECT_NE(out.str().find("no: exact 1 leaf"), std::string::npos);
  EXPECT_EQ(cli::cmd_solve({.input = two, .k = 1}, out, err), 2);
  EXPECT_EQ(cli::cmd_solve({.input = two, .k = 2, .mode = "tree"}, out, err), 1);
  EXPECT_EQ(cli::cmd_solve({.input = broken, .k = 1}, out, err), 3);
  EXPECT_NE(err.str().find("line 2"), std::string::npos);
  EXPECT_EQ(cli::cmd_solve({.input = dir.file("missing.txt"), .k = 1}, out, err), 7);
}

TEST(CliSolve, UnsupportedAndWidthGuard) {
  TempDir dir;
  std::vector<Arc> arcs;
  for (int v = 0; v < 7; ++v) {
    arcs.push_back({v, (v + 1) % 7});
    arcs.push_back({7 + v, 7 + (v + 1) % 7});
  }
  arcs.push_back({0, 7});
  const auto f = dir.file("u.txt", instance_text(Digraph(14, arcs)));
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_solve({.input = f, .k = 10}, out, err), 4);
  const auto k30 = dir.file("k30.txt", instance_text(complete_digraph(30)));
  EXPECT_EQ(cli::cmd_solve({.input = k30, .k = 29}, out, err), 0);
  EXPECT_EQ(cli::cmd_solve({.input = k30, .k = 30}, out, err), 5);
}

TEST(CliSolve, StructuredAndWitnessOut) {
  TempDir dir;
  const Digraph d = gen_ht(6);
  const auto f = dir.file("h6.txt", instance_text(d));
  const auto w = dir.file("w.txt");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_solve({.input = f, .k = 19, .emit = "structured", .check = true, .witness_out = w},
                           out, err),
            0);
  const auto doc = nlohmann::json::parse(out.str());
  EXPECT_EQ(doc["schema_version"], cli::kSchemaVersion);
  EXPECT_EQ(doc["answer"], "yes");
  EXPECT_EQ(doc["leaves"], 19);
  EXPECT_EQ(doc["instance_digest"], instance_digest(d));
  EXPECT_EQ(doc["witness_arcs"].size(), 36u);
  EXPECT_TRUE(doc["bounds"].contains("strongly_connected_width"));
  std::ifstream in(w);
  const auto parsed = read_witness(in);
  ASSERT_TRUE(parsed.tree);
  EXPECT_TRUE(is_out_branching(d, *parsed.tree));
  EXPECT_EQ(leaf_count(*parsed.tree), 19);
}

TEST(CliGenerate, Families) {
  TempDir dir;
  std::ostringstream out, err;
  const auto h = dir.file("h.txt");
  ASSERT_EQ(cli::cmd_generate({.family = "ht", .t = 6, .out = h}, out, err), 0);
  std::ifstream in(h);
  EXPECT_EQ(read_instance(in).graph.num_vertices(), 37);

  out.str("");
  ASSERT_EQ(cli::cmd_generate({.family = "setcover", .x = 3, .y = 4, .p = 1.0, .out = dir.file("s.txt")},
                              out, err),
            0);
  EXPECT_NE(out.str().find("known_max_leaves=6"), std::string::npos);

  const auto a = dir.file("a.txt"), b = dir.file("b.txt");
  cli::cmd_generate({.family = "random-sc", .n = 50, .d = 3, .seed = 1, .out = a}, out, err);
  cli::cmd_generate({.family = "random-sc", .n = 50, .d = 3, .seed = 1, .out = b}, out, err);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(cli::cmd_generate({.family = "ht", .t = 3}, out, err), 6);
  EXPECT_EQ(cli::cmd_generate({.family = "nope"}, out, err), 6);
}

TEST(CliDecompose, Strategies) {
  TempDir dir;
  std::ostringstream out, err;
  const auto dag = dir.file("dag.txt", instance_text(gen_random_dag_single_source(30, 50, Seed{2})));
  EXPECT_EQ(cli::cmd_decompose({.input = dag, .strategy = "acyclic"}, out, err), 0);
  EXPECT_NE(out.str().find("4p - 1"), std::string::npos);
  const auto cyc = dir.file("cyc.txt", instance_text(directed_cycle(8)));
  out.str("");
  const auto pd_file = dir.file("pd.txt");
  EXPECT_EQ(cli::cmd_decompose({.input = cyc, .strategy = "beta", .out = pd_file}, out, err), 0);
  EXPECT_NE(out.str().find("verifier ok"), std::string::npos);
  EXPECT_EQ(cli::cmd_verify({.input = cyc, .decomposition = pd_file}, out, err), 0);
  EXPECT_EQ(cli::cmd_decompose({.input = cyc, .strategy = "acyclic"}, out, err), 4);

  const Digraph small = gen_random_digraph(8, 0.3, Seed{5});
  const auto s = dir.file("s.txt", instance_text(small));
  out.str("");
  EXPECT_EQ(cli::cmd_decompose({.input = s, .strategy = "exact"}, out, err), 0);
  EXPECT_NE(out.str().find("width " + std::to_string(exact_pathwidth(underlying_graph(small)).value)),
            std::string::npos);
}

TEST(CliVerify, Witnesses) {
  TempDir dir;
  std::ostringstream out, err;
  const Digraph d = gen_random_strongly_connected(12, 2, Seed{3});
  const auto f = dir.file("d.txt", instance_text(d));
  std::ostringstream w;
  write_witness(w, make_1ae_optimal(d, initial_out_branching(d, 0)));
  const auto good = dir.file("good.txt", w.str());
  EXPECT_EQ(cli::cmd_verify({.input = f, .witness = good, .local_opt = true}, out, err), 0);
  EXPECT_NE(out.str().find("forbidden arc patterns: none"), std::string::npos);

  const auto c3 = dir.file("c3.txt", instance_text(directed_cycle(3)));
  const auto cyc = dir.file("cw.txt", "3 3\n0 1\n1 2\n2 0\n");
  out.str("");
  EXPECT_EQ(cli::cmd_verify({.input = c3, .witness = cyc}, out, err), 1);
  EXPECT_NE(out.str().find("cycle"), std::string::npos);

  const auto foreign = dir.file("fw.txt", "3 2\n0 2\n2 1\n");
  EXPECT_EQ(cli::cmd_verify({.input = c3, .witness = foreign}, out, err), 1);
  EXPECT_EQ(cli::cmd_verify({.input = c3}, out, err), 6);
}

TEST(CliBench, SuitesAndBudget) {
  TempDir dir;
  std::ostringstream out, err;
  const auto report = dir.file("r.csv");
  EXPECT_EQ(cli::cmd_bench({.suite = "oracle-equiv", .report = report, .count = 6, .jobs = 2}, out, err), 0);
  const auto csv = slurp(report);
  EXPECT_EQ(csv.rfind("seed,n,m,width", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_EQ(cli::cmd_bench({.suite = "bounds", .count = 5}, out, err), 0);
  EXPECT_EQ(cli::cmd_bench({.suite = "decomp", .count = 4}, out, err), 0);
  out.str("");
  EXPECT_EQ(cli::cmd_bench({.suite = "bounds", .budget = 1e-9, .count = 50}, out, err), 8);
  EXPECT_NE(out.str().find("# incomplete"), std::string::npos);
}
