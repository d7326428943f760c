#include <iostream>

#include <CLI11.hpp>

#include "mlob/cli.hpp"

int main(int argc, char** argv) {
  using namespace mlob::cli;
  CLI::App app{"Maximum-leaf out-branchings and out-trees"};
  app.footer(kExitCodeTable);
  app.require_subcommand(1);

  SolveOptionsCli solve;
  auto* s = app.add_subcommand("solve", "Decide whether a k-leaf out-branching (or out-tree) exists");
  s->add_option("input", solve.input, "Instance file")->required();
  s->add_option("-k,--k", solve.k, "Leaf target")->required()->check(CLI::PositiveNumber);
  s->add_option("--mode", solve.mode, "branching | tree")->check(CLI::IsMember({"branching", "tree"}));
  s->add_option("--emit", solve.emit, "text | structured")->check(CLI::IsMember({"text", "structured"}));
  s->add_flag("--check", solve.check, "Verify local optimality and the witness");
  s->add_option("--witness-out", solve.witness_out, "Write the witness tree to this file");

  GenerateOptionsCli gen;
  auto* g = app.add_subcommand("generate", "Write a generated instance");
  g->add_option("family", gen.family, "ht | setcover | random-sc | random-dag | indeg2")
      ->required()
      ->check(CLI::IsMember({"ht", "setcover", "random-sc", "random-dag", "indeg2"}));
  g->add_option("--t", gen.t, "ht: branch count (>= 6)");
  g->add_option("--n", gen.n, "Vertex count");
  g->add_option("--m", gen.m, "random-dag: arc count (default 2n)");
  g->add_option("--d", gen.d, "random-sc: minimum in-degree");
  g->add_option("--x", gen.x, "setcover: |X|");
  g->add_option("--y", gen.y, "setcover: |Y|");
  g->add_option("--p", gen.p, "setcover: X-Y edge probability")->check(CLI::Range(0.0, 1.0));
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("-o,--out", gen.out, "Output file (default stdout)");

  DecomposeOptionsCli dec;
  auto* c = app.add_subcommand("decompose", "Build and check a path decomposition");
  c->add_option("input", dec.input, "Instance file")->required();
  c->add_option("--strategy", dec.strategy, "auto | acyclic | beta | exact")
      ->check(CLI::IsMember({"auto", "acyclic", "beta", "exact"}));
  c->add_option("-o,--out", dec.out, "Write the decomposition to this file");

  VerifyOptionsCli ver;
  auto* v = app.add_subcommand("verify", "Check a witness tree or a decomposition");
  v->add_option("input", ver.input, "Instance file")->required();
  auto* wit = v->add_option("--witness", ver.witness, "Witness file");
  auto* dcm = v->add_option("--decomposition", ver.decomposition, "Decomposition file");
  wit->excludes(dcm);
  v->add_option("--mode", ver.mode, "branching | tree")->check(CLI::IsMember({"branching", "tree"}));
  v->add_flag("--local-opt", ver.local_opt, "Fail on forbidden arc patterns");

  BenchOptionsCli bench;
  auto* b = app.add_subcommand("bench", "Run a measurement suite and write a CSV report");
  b->add_option("suite", bench.suite, "bounds | oracle-equiv | decomp")
      ->required()
      ->check(CLI::IsMember({"bounds", "oracle-equiv", "decomp"}));
  b->add_option("--budget", bench.budget, "Wall-clock budget in seconds");
  b->add_option("--report", bench.report, "CSV output file (default stdout)");
  b->add_option("--count", bench.count, "Number of instances");
  b->add_option("--jobs", bench.jobs, "Worker threads");
  b->add_option("--seed", bench.seed, "First seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(mlob::ExitCode::kUsage);
  }

  if (*s) return cmd_solve(solve, std::cout, std::cerr);
  if (*g) return cmd_generate(gen, std::cout, std::cerr);
  if (*c) return cmd_decompose(dec, std::cout, std::cerr);
  if (*v) return cmd_verify(ver, std::cout, std::cerr);
  return cmd_bench(bench, std::cout, std::cerr);
}
