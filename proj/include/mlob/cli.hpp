#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mlob/branching.hpp"
#include "mlob/decomp.hpp"
#include "mlob/digraph.hpp"
#include "mlob/error.hpp"
#include "mlob/gen.hpp"
#include "mlob/io.hpp"
#include "mlob/oracle.hpp"
#include "mlob/solver.hpp"

namespace mlob::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kExitCodeTable =
    "Exit codes:\n"
    "  0  yes / all checks passed\n"
    "  1  no (exact value printed) / a check or bound failed\n"
    "  2  no out-branching exists\n"
    "  3  parse error\n"
    "  4  unsupported digraph class or instance too large\n"
    "  5  decomposition width above the guard\n"
    "  6  invalid arguments\n"
    "  7  file I/O error\n"
    "  8  benchmark budget exceeded, report incomplete\n"
    "  9  internal error\n";

inline int code(ExitCode c) { return static_cast<int>(c); }

inline ParsedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  try {
    return read_instance(in);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse) throw Error(ErrorKind::kParse, path + ": " + e.what());
    throw;
  }
}

template <class Fn>
void save_file(const std::string& path, Fn&& write) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  write(out);
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path);
}

// Runs a command body, mapping library errors onto exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return code(exit_code_for(e.kind()));
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return code(ExitCode::kInternal);
  }
}

inline double min_in_degree3_bound(int n) { return std::cbrt(n / 4.0) - 1.0; }

// ---------------------------------------------------------------------------

struct SolveOptionsCli {
  std::string input;
  int k = 1;
  std::string mode = "branching";  // branching | tree
  std::string emit = "text";       // text | structured
  bool check = false;
  std::string witness_out;
};

inline nlohmann::json result_document(const Digraph& d, const SolveOptionsCli& o,
                                      const SolveResult& r, double wall_ms) {
  using nlohmann::json;
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["instance_digest"] = instance_digest(d);
  doc["n"] = d.num_vertices();
  doc["m"] = d.num_arcs();
  doc["mode"] = o.mode;
  doc["k"] = o.k;
  doc["outcome"] = to_string(r.outcome);
  doc["answer"] = r.outcome == Outcome::kNoOutBranching ? "no" : (r.yes() ? "yes" : "no");
  doc["leaves"] = r.value;
  doc["local_search_leaves"] = r.local_search_leaves;
  json arcs = json::array();
  if (r.witness) {
    doc["root"] = r.witness->root;
    for (const Arc& a : r.witness->arcs()) arcs.push_back({a.tail, a.head});
  } else {
    doc["root"] = nullptr;
  }
  doc["witness_arcs"] = arcs;
  doc["decomposition_width"] =
      r.decomposition_width >= 0 ? json(r.decomposition_width) : json(nullptr);
  doc["decomposition_source"] =
      r.decomposition_source ? json(to_string(*r.decomposition_source)) : json(nullptr);
  doc["builder"] = r.builder ? json(to_string(*r.builder)) : json(nullptr);
  doc["builder_width"] = r.builder_width >= 0 ? json(r.builder_width) : json(nullptr);
  doc["layers"] = r.layers;
  const int p = r.local_search_leaves;
  json bounds;
  bounds["min_in_degree_3_leaves"] = min_in_degree3_bound(d.num_vertices());
  bounds["acyclic_width"] = 4 * p - 1;
  bounds["strongly_connected_width"] = 2.0 * (r.layers + 2.5) * (p + 1) + r.layers;
  doc["bounds"] = bounds;
  doc["wall_time_ms"] = wall_ms;
  return doc;
}

inline int cmd_solve(const SolveOptionsCli& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.mode != "branching" && o.mode != "tree")
      throw Error(ErrorKind::kInvalidArgument, "mode must be branching or tree");
    if (o.emit != "text" && o.emit != "structured")
      throw Error(ErrorKind::kInvalidArgument, "emit must be text or structured");
    const ParsedInstance p = load_instance(o.input);
    for (const auto& w : p.warnings) err << "warning: " << w << '\n';
    const Digraph& d = p.graph;
    SolveOptions opts;
    opts.check = o.check;
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = o.mode == "tree" ? solve_k_dmlot(d, o.k, opts) : solve_k_dmlob(d, o.k, opts);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (o.check && r.witness) {
      if (o.mode == "tree" ? !is_out_tree(d, *r.witness) : !is_out_branching(d, *r.witness))
        throw std::logic_error("witness failed verification");
      if (leaf_count(*r.witness) != r.value) throw std::logic_error("witness leaf count mismatch");
    }
    if (!o.witness_out.empty() && r.witness)
      save_file(o.witness_out, [&](std::ostream& f) { write_witness(f, *r.witness); });

    if (o.emit == "structured") {
      out << result_document(d, o, r, ms).dump(2) << '\n';
    } else if (r.outcome == Outcome::kNoOutBranching) {
      out << "no out-branching exists\n";
    } else {
      out << (r.yes() ? "yes" : "no") << ": " << (r.outcome == Outcome::kFound ? "found " : "exact ")
          << r.value << (r.value == 1 ? " leaf" : " leaves") << " (k = " << o.k << ")\n";
      if (r.decomposition_source)
        out << "decomposition: " << to_string(*r.decomposition_source) << ", width "
            << r.decomposition_width << '\n';
      if (r.witness && r.yes()) {
        out << "root " << r.witness->root << '\n';
        for (const Arc& a : r.witness->arcs()) out << a.tail << ' ' << a.head << '\n';
      }
    }
    if (r.outcome == Outcome::kNoOutBranching) return code(ExitCode::kNoOutBranching);
    return code(r.yes() ? ExitCode::kYes : ExitCode::kNo);
  });
}

// ---------------------------------------------------------------------------

struct GenerateOptionsCli {
  std::string family;  // ht | setcover | random-sc | random-dag | indeg2
  int t = 6;
  int n = 20;
  long m = -1;  // random-dag; defaults to 2n
  int d = 3;    // random-sc in-degree floor
  int x = 3, y = 4;
  double p = 0.5;  // setcover edge probability
  std::uint64_t seed = 1;
  std::string out;
};

inline int cmd_generate(const GenerateOptionsCli& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Digraph d;
    std::vector<std::string> meta;
    if (o.family == "ht") {
      d = gen_ht(o.t);
      meta.push_back("t=" + std::to_string(o.t));
    } else if (o.family == "setcover") {
      const auto edges = gen_random_bipartite(o.x, o.y, o.p, Seed{o.seed});
      const auto inst = gen_setcover_dag(o.x, o.y, edges);
      d = inst.graph;
      meta.push_back("x=" + std::to_string(o.x) + " y=" + std::to_string(o.y));
      if (inst.known) meta.push_back("known_max_leaves=" + std::to_string(*inst.known));
    } else if (o.family == "random-sc") {
      d = gen_random_strongly_connected(o.n, o.d, Seed{o.seed});
      meta.push_back("min_in_degree_floor=" + std::to_string(o.d));
    } else if (o.family == "random-dag") {
      d = gen_random_dag_single_source(o.n, o.m < 0 ? 2L * o.n : o.m, Seed{o.seed});
    } else if (o.family == "indeg2") {
      d = gen_random_oriented_indegree2(o.n, Seed{o.seed});
    } else {
      throw Error(ErrorKind::kInvalidArgument, "unknown family '" + o.family + "'");
    }
    meta.insert(meta.begin(), "n=" + std::to_string(d.num_vertices()) +
                                  " m=" + std::to_string(d.num_arcs()));
    meta.push_back(std::string("strongly_connected=") + (is_strongly_connected(d) ? "yes" : "no"));
    meta.push_back(std::string("acyclic=") + (is_acyclic(d) ? "yes" : "no"));
    meta.push_back(std::string("has_out_branching=") + (has_out_branching(d) ? "yes" : "no"));
    meta.push_back("min_in_degree=" + std::to_string(min_in_degree(d)));
    meta.push_back("digest=" + instance_digest(d));

    if (o.out.empty()) {
      write_instance(out, d);
      for (const auto& line : meta) err << line << '\n';
    } else {
      save_file(o.out, [&](std::ostream& f) { write_instance(f, d); });
      for (const auto& line : meta) out << line << '\n';
    }
    return code(ExitCode::kYes);
  });
}

// ---------------------------------------------------------------------------

struct DecomposeOptionsCli {
  std::string input;
  std::string strategy = "auto";  // auto | acyclic | beta | exact
  std::string out;
};

inline int cmd_decompose(const DecomposeOptionsCli& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ParsedInstance p = load_instance(o.input);
    for (const auto& w : p.warnings) err << "warning: " << w << '\n';
    const Digraph& d = p.graph;
    const UGraph g = underlying_graph(d);
    const int n = d.num_vertices();

    std::string strategy = o.strategy;
    if (strategy == "auto") {
      if (n > 0 && is_acyclic(d) && has_out_branching(d))
        strategy = "acyclic";
      else if (n > 0 && has_out_branching(d) && (is_strongly_connected(d) || is_family_L(d)))
        strategy = "beta";
      else if (n <= OracleLimits{}.max_n_pathwidth)
        strategy = "exact";
      else
        throw Error(ErrorKind::kUnsupportedClass, "no decomposition strategy applies");
    }

    PathDecomposition pd;
    double bound = 0;
    std::string bound_text;
    if (strategy == "acyclic" || strategy == "beta") {
      const auto roots = has_out_branching(d);
      if (!roots) throw Error(ErrorKind::kUnsupportedClass, "digraph has no out-branching");
      if (strategy == "acyclic" && !is_acyclic(d))
        throw Error(ErrorKind::kUnsupportedClass, "acyclic strategy on a digraph with a cycle");
      const OutBranching t = make_1ae_optimal(d, initial_out_branching(d, roots->front()));
      const int leaves = leaf_count(t);
      if (strategy == "acyclic") {
        auto a = acyclic_decomposition(d, t);
        pd = std::move(a.decomposition);
        bound = 4.0 * leaves - 1;
        bound_text = "4p - 1 = " + std::to_string(4 * leaves - 1) + " (p = " +
                     std::to_string(leaves) + ")";
      } else {
        auto b = strongly_connected_decomposition(d, t);
        pd = std::move(b.decomposition);
        bound = b.root_bound();
        std::ostringstream ss;
        ss << "2(t + 2.5)(p + 1) + t = " << bound << " (p = " << leaves << ", t = " << b.layers
           << ")";
        bound_text = ss.str();
      }
    } else if (strategy == "exact") {
      const auto pw = exact_pathwidth(g);
      pd = ordering_to_decomposition(g, pw.ordering);
      bound = pw.value;
      bound_text = "pathwidth = " + std::to_string(pw.value);
    } else {
      throw Error(ErrorKind::kInvalidArgument, "unknown strategy '" + o.strategy + "'");
    }

    const DecompositionCheck check = verify_path_decomposition(g, pd);
    if (!o.out.empty()) save_file(o.out, [&](std::ostream& f) { write_decomposition(f, pd); });
    for (std::size_t i = 0; i < pd.bags.size(); ++i) {
      out << "bag " << i << ':';
      for (VertexId v : pd.bags[i]) out << ' ' << v;
      out << '\n';
    }
    const bool holds = pd.width() <= bound;
    out << "strategy " << strategy << '\n'
        << "width " << pd.width() << '\n'
        << "bound " << bound_text << (holds ? " holds" : " VIOLATED") << '\n'
        << "verifier " << (check ? "ok" : "FAIL " + check.violation) << '\n';
    return code(check && holds ? ExitCode::kYes : ExitCode::kNo);
  });
}

// ---------------------------------------------------------------------------

struct VerifyOptionsCli {
  std::string input;
  std::string witness;
  std::string decomposition;
  std::string mode = "branching";
  bool local_opt = false;  // treat forbidden arc patterns as failures
};

inline int cmd_verify(const VerifyOptionsCli& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.witness.empty() == o.decomposition.empty())
      throw Error(ErrorKind::kInvalidArgument, "give exactly one of --witness, --decomposition");
    const ParsedInstance p = load_instance(o.input);
    const Digraph& d = p.graph;
    bool ok = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail = "") {
      out << (pass ? "ok   " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << '\n';
      ok &= pass;
    };

    if (!o.decomposition.empty()) {
      std::ifstream in(o.decomposition);
      if (!in) throw Error(ErrorKind::kIo, "cannot open " + o.decomposition);
      const PathDecomposition pd = read_decomposition(in);
      const auto check = verify_path_decomposition(underlying_graph(d), pd);
      report("path decomposition", static_cast<bool>(check), check.violation);
      out << "width " << pd.width() << '\n';
      return code(ok ? ExitCode::kYes : ExitCode::kNo);
    }

    std::ifstream in(o.witness);
    if (!in) throw Error(ErrorKind::kIo, "cannot open " + o.witness);
    const ParsedWitness w = read_witness(in);
    report("out-tree structure", w.tree.has_value(), w.error);
    if (!w.tree) return code(ExitCode::kNo);
    const OutTree& t = *w.tree;
    if (t.host_size() != d.num_vertices()) {
      report("vertex count", false,
             std::to_string(t.host_size()) + " vs " + std::to_string(d.num_vertices()));
      return code(ExitCode::kNo);
    }
    const auto violation = out_tree_violation(d, t);
    report("arcs belong to the digraph", !violation, violation.value_or(""));
    if (o.mode == "branching") report("spanning", t.is_spanning());
    const int leaves = leaf_count(t);
    out << "leaves " << leaves << '\n';
    if (violation) return code(ExitCode::kNo);

    // Counting facts on branch vertices and link paths.
    try {
      const TreeClassification c = classify(t);
      report("branch vertices <= leaves - 1", c.branches.size() + 1 <= c.leaves.size());
      report("link paths <= 2 leaves - 1", c.link_paths.size() + 1 <= 2 * c.leaves.size());
    } catch (const std::logic_error& e) {
      report("counting facts", false, e.what());
    }

    if (o.mode == "branching" && t.is_spanning()) {
      const auto v = forbidden_arc_patterns(d, t);
      out << "forbidden arc patterns: " << (v.empty() ? "none" : std::to_string(v.size())) << '\n';
      for (const auto& x : v) out << "  " << x.describe() << '\n';
      if (o.local_opt) report("no forbidden arc patterns", v.empty());
    }
    return code(ok ? ExitCode::kYes : ExitCode::kNo);
  });
}

// ---------------------------------------------------------------------------

struct BenchOptionsCli {
  std::string suite;  // bounds | oracle-equiv | decomp
  double budget = 600;
  std::string report;
  int count = 20;
  int jobs = 1;
  std::uint64_t seed = 1;
};

struct BenchRow {
  std::string csv;
  bool holds = true;
};

// Runs tasks on `jobs` threads until the budget expires; rows of tasks that
// never started stay empty.
inline std::vector<std::optional<BenchRow>> run_tasks(
    const std::vector<std::function<BenchRow()>>& tasks, int jobs, double budget_seconds) {
  std::vector<std::optional<BenchRow>> rows(tasks.size());
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(budget_seconds));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next++;
      if (i >= tasks.size() || std::chrono::steady_clock::now() >= deadline) return;
      try {
        rows[i] = tasks[i]();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

inline int cmd_bench(const BenchOptionsCli& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.count < 1 || o.jobs < 1 || o.budget <= 0)
      throw Error(ErrorKind::kInvalidArgument, "count, jobs and budget must be positive");
    std::string header;
    std::vector<std::function<BenchRow()>> tasks;
    if (o.suite == "bounds") {
      header = "seed,n,m,min_in_degree,leaves_found,bound,holds";
      const int sizes[] = {27, 64, 125, 216, 250};
      for (int i = 0; i < o.count; ++i) {
        const int n = sizes[i % 5];
        const std::uint64_t seed = o.seed + i;
        tasks.push_back([n, seed] {
          const Digraph d = gen_random_strongly_connected(n, 3, Seed{seed});
          const OutBranching t = make_1ae_optimal(d, initial_out_branching(d, 0));
          const int leaves = leaf_count(t);
          const int bound = static_cast<int>(std::ceil(std::cbrt(n / 4.0))) - 1;
          std::ostringstream ss;
          ss << seed << ',' << n << ',' << d.num_arcs() << ',' << min_in_degree(d) << ','
             << leaves << ',' << bound << ',' << (leaves >= bound);
          return BenchRow{ss.str(), leaves >= bound};
        });
      }
    } else if (o.suite == "oracle-equiv") {
      header = "seed,n,m,width,dp_spanning,oracle_spanning,dp_tree,oracle_tree,mismatch";
      for (int i = 0; i < o.count; ++i) {
        const std::uint64_t seed = o.seed + i;
        tasks.push_back([seed] {
          detail::Rng rng(seed);
          const int n = 5 + static_cast<int>(detail::uniform_below(rng, 5));
          const double p = 0.1 + 0.05 * static_cast<double>(detail::uniform_below(rng, 5));
          const Digraph d = gen_random_digraph(n, p, Seed{seed});
          const UGraph g = underlying_graph(d);
          const auto pd = ordering_to_decomposition(g, exact_pathwidth(g).ordering);
          const int ds = dp_max_leaves(d, pd, DpMode::kSpanning).value;
          const int dt = dp_max_leaves(d, pd, DpMode::kTree).value;
          const int os = exact_max_leaf_out_branching(d).value;
          const int ot = exact_max_leaf_out_tree(d).value;
          const bool mismatch = ds != os || dt != ot;
          std::ostringstream ss;
          ss << seed << ',' << n << ',' << d.num_arcs() << ',' << pd.width() << ',' << ds << ','
             << os << ',' << dt << ',' << ot << ',' << mismatch;
          return BenchRow{ss.str(), !mismatch};
        });
      }
    } else if (o.suite == "decomp") {
      header = "seed,kind,n,m,leaves,layers,width,bound,ratio,valid";
      for (int i = 0; i < o.count; ++i) {
        const std::uint64_t seed = o.seed + i;
        const bool acyclic = i % 2 == 0;
        tasks.push_back([seed, acyclic] {
          detail::Rng rng(seed);
          const int n = 10 + static_cast<int>(detail::uniform_below(rng, 51));
          Digraph d = acyclic ? gen_random_dag_single_source(n, 2L * n, Seed{seed})
                              : gen_random_strongly_connected(n, 2, Seed{seed});
          const OutBranching t = make_1ae_optimal(d, initial_out_branching(d, has_out_branching(d)->front()));
          const int p = leaf_count(t);
          PathDecomposition pd;
          double bound;
          int layers = 0;
          if (acyclic) {
            pd = acyclic_decomposition(d, t).decomposition;
            bound = 4.0 * p - 1;
          } else {
            auto b = strongly_connected_decomposition(d, t);
            pd = std::move(b.decomposition);
            bound = b.root_bound();
            layers = b.layers;
          }
          const bool valid = static_cast<bool>(verify_path_decomposition(underlying_graph(d), pd));
          const double ratio = pd.width() / bound;
          std::ostringstream ss;
          ss << seed << ',' << (acyclic ? "acyclic" : "strongly-connected") << ',' << n << ','
             << d.num_arcs() << ',' << p << ',' << layers << ',' << pd.width() << ',' << bound
             << ',' << std::fixed << std::setprecision(4) << ratio << ',' << valid;
          return BenchRow{ss.str(), valid && ratio <= 1.0};
        });
      }
    } else {
      throw Error(ErrorKind::kInvalidArgument, "unknown suite '" + o.suite + "'");
    }

    const auto rows = run_tasks(tasks, o.jobs, o.budget);
    std::ostringstream csv;
    csv << header << '\n';
    int done = 0, failed = 0;
    for (const auto& r : rows) {
      if (!r) continue;
      ++done;
      failed += !r->holds;
      csv << r->csv << '\n';
    }
    const bool complete = done == static_cast<int>(tasks.size());
    if (!complete) csv << "# incomplete: " << done << " of " << tasks.size() << " instances\n";
    if (o.report.empty()) {
      out << csv.str();
    } else {
      save_file(o.report, [&](std::ostream& f) { f << csv.str(); });
    }
    out << o.suite << ": " << done << '/' << tasks.size() << " instances, " << failed
        << " failed" << (complete ? "" : ", budget exceeded") << '\n';
    if (!complete) return code(ExitCode::kBudgetExceeded);
    return code(failed == 0 ? ExitCode::kYes : ExitCode::kNo);
  });
}

}  // namespace mlob::cli
