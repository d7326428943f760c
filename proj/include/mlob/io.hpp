#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mlob/branching.hpp"
#include "mlob/decomp.hpp"
#include "mlob/digraph.hpp"
#include "mlob/error.hpp"

// Plain-text formats. Instance: header "n m", then m lines "u v" with
// 0-based tail and head; lines starting with '#' and blank lines are
// ignored. Witness: an instance listing the tree arcs, with an optional
// "# root r" line. Decomposition: "bags B", then B lines "k v1 ... vk".

namespace mlob {

namespace detail {

struct LineReader {
  std::istream& in;
  int line_no = 0;
  std::string line;

  // Next line that is neither blank nor a comment.
  bool next() {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + what);
  }

  std::vector<long long> integers() const {
    std::istringstream ss(line);
    std::vector<long long> out;
    std::string tok;
    while (ss >> tok) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        fail("expected an integer, got '" + tok + "'");
      }
      if (used != tok.size()) fail("expected an integer, got '" + tok + "'");
      out.push_back(v);
    }
    return out;
  }
};

}  // namespace detail

struct ParsedInstance {
  Digraph graph;
  std::vector<std::string> warnings;
  std::optional<VertexId> root;  // from a "# root r" line, if any
};

inline ParsedInstance read_instance(std::istream& in) {
  detail::LineReader r{in};
  ParsedInstance out;
  // Scan comments by hand so the root directive is seen.
  auto next = [&]() {
    while (std::getline(in, r.line)) {
      ++r.line_no;
      const auto first = r.line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (r.line[first] == '#') {
        std::istringstream ss(r.line.substr(first + 1));
        std::string word;
        long long v;
        if (ss >> word && word == "root" && ss >> v) out.root = static_cast<VertexId>(v);
        continue;
      }
      return true;
    }
    return false;
  };
  if (!next()) r.fail("missing header \"n m\"");
  const auto header = r.integers();
  if (header.size() != 2) r.fail("header must be \"n m\"");
  if (header[0] < 0 || header[1] < 0) r.fail("negative count in header");
  if (header[0] > 100'000'000) r.fail("vertex count too large");
  const int n = static_cast<int>(header[0]);
  const long long m = header[1];
  std::vector<Arc> arcs;
  for (long long i = 0; i < m; ++i) {
    if (!next()) r.fail("expected " + std::to_string(m) + " arc lines, found " + std::to_string(i));
    const auto uv = r.integers();
    if (uv.size() != 2) r.fail("arc line must be \"u v\"");
    if (uv[0] < 0 || uv[0] >= n || uv[1] < 0 || uv[1] >= n)
      r.fail("vertex out of range [0, " + std::to_string(n) + ")");
    if (uv[0] == uv[1]) r.fail("self-loop " + std::to_string(uv[0]));
    arcs.push_back({static_cast<VertexId>(uv[0]), static_cast<VertexId>(uv[1])});
  }
  if (next()) r.fail("more arc lines than the header announces");
  if (out.root && (*out.root < 0 || *out.root >= n)) r.fail("root out of range");
  out.graph = Digraph(n, arcs);
  if (out.graph.dropped_arcs() > 0)
    out.warnings.push_back(std::to_string(out.graph.dropped_arcs()) + " duplicate arc(s) collapsed");
  return out;
}

inline void write_instance(std::ostream& out, const Digraph& d) {
  out << d.num_vertices() << ' ' << d.num_arcs() << '\n';
  for (const Arc& a : d.arcs()) out << a.tail << ' ' << a.head << '\n';
}

inline void write_witness(std::ostream& out, const OutTree& t) {
  const auto arcs = t.arcs();
  out << "# root " << t.root << '\n';
  out << t.host_size() << ' ' << arcs.size() << '\n';
  for (const Arc& a : arcs) out << a.tail << ' ' << a.head << '\n';
}

struct ParsedWitness {
  std::optional<OutTree> tree;
  std::string error;  // why the arcs are not an out-tree
};

inline ParsedWitness read_witness(std::istream& in) {
  ParsedInstance p = read_instance(in);
  const int n = p.graph.num_vertices();
  ParsedWitness out;
  if (p.graph.num_arcs() == 0) {
    if (n == 0) {
      out.error = "empty witness";
    } else if (!p.root && n > 1) {
      out.error = "witness without arcs needs a \"# root r\" line";
    } else {
      out.tree = OutTree(n, p.root.value_or(0));
    }
    return out;
  }
  out.tree = out_tree_from_arcs(n, p.graph.arcs(), &out.error);
  if (out.tree && p.root && out.tree->root != *p.root) {
    out.error = "declared root " + std::to_string(*p.root) + " differs from arc root " +
                std::to_string(out.tree->root);
    out.tree.reset();
  }
  return out;
}

inline void write_decomposition(std::ostream& out, const PathDecomposition& pd) {
  out << "bags " << pd.bags.size() << '\n';
  for (const auto& bag : pd.bags) {
    out << bag.size();
    for (VertexId v : bag) out << ' ' << v;
    out << '\n';
  }
}

inline PathDecomposition read_decomposition(std::istream& in) {
  detail::LineReader r{in};
  if (!r.next()) r.fail("missing header \"bags B\"");
  {
    std::istringstream ss(r.line);
    std::string word;
    long long count = -1;
    std::string rest;
    if (!(ss >> word >> count) || word != "bags" || count < 0 || (ss >> rest))
      r.fail("header must be \"bags B\"");
    PathDecomposition pd;
    for (long long i = 0; i < count; ++i) {
      if (!r.next()) r.fail("expected " + std::to_string(count) + " bag lines");
      const auto nums = r.integers();
      if (nums.empty() || nums[0] < 0 || static_cast<long long>(nums.size()) != nums[0] + 1)
        r.fail("bag line must be \"k v1 ... vk\"");
      std::vector<VertexId> bag;
      for (std::size_t j = 1; j < nums.size(); ++j) {
        if (nums[j] < 0 || nums[j] > 100'000'000) r.fail("vertex out of range");
        bag.push_back(static_cast<VertexId>(nums[j]));
      }
      pd.bags.push_back(std::move(bag));
    }
    if (r.next()) r.fail("more bag lines than the header announces");
    return pd;
  }
}

// FNV-1a 64 over the canonical instance text.
inline std::string instance_digest(const Digraph& d) {
  std::ostringstream ss;
  write_instance(ss, d);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : ss.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mlob
