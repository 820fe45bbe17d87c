#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "conewalk/errors.hpp"

namespace conewalk {

/// One stored count of a successor matrix: a point of type `col` has exactly
/// `count` successors of type `row`.  Stored entries are always >= 1.
struct Triplet {
  std::int32_t row;
  std::int32_t col;
  std::int64_t count;
};

struct SparseEntry {
  std::int32_t row;
  std::int32_t col;
  double value;
};

/// A finite type alphabet together with the successor-count matrix of a
/// regular graph of the given degree.  Triplets are sorted by (col, row) so
/// that identical inputs always produce bit-identical instances.
/// Immutable after construction; safe to share across threads.
struct TypeSystem {
  std::int64_t type_count = 0;
  std::int64_t degree = 0;
  std::vector<Triplet> successors;
  std::vector<std::string> labels; // optional, only for reports

  std::int64_t triplet_count() const { return static_cast<std::int64_t>(successors.size()); }
};

struct PredecessorVector {
  std::vector<std::int64_t> counts;
};

inline std::vector<std::int64_t> column_sums(const TypeSystem& ts) {
  std::vector<std::int64_t> sums(static_cast<std::size_t>(ts.type_count), 0);
  for (const Triplet& t : ts.successors) sums[static_cast<std::size_t>(t.col)] += t.count;
  return sums;
}

/// p_j = degree - column sum j.  Valid systems have p_j >= 1 for every type.
inline PredecessorVector predecessors(const TypeSystem& ts) {
  PredecessorVector p;
  p.counts = column_sums(ts);
  for (auto& c : p.counts) c = ts.degree - c;
  return p;
}

namespace detail {

/// Column-major adjacency of the directed graph on types with an edge
/// col -> row for every stored triplet.
struct TypeGraph {
  std::vector<std::int64_t> offsets; // size type_count + 1
  std::vector<std::int32_t> heads;   // rows, grouped by column

  static TypeGraph build(const TypeSystem& ts) {
    TypeGraph g;
    const auto n = static_cast<std::size_t>(ts.type_count);
    g.offsets.assign(n + 1, 0);
    for (const Triplet& t : ts.successors) ++g.offsets[static_cast<std::size_t>(t.col) + 1];
    for (std::size_t j = 0; j < n; ++j) g.offsets[j + 1] += g.offsets[j];
    g.heads.resize(ts.successors.size());
    std::vector<std::int64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (const Triplet& t : ts.successors)
      g.heads[static_cast<std::size_t>(cursor[static_cast<std::size_t>(t.col)]++)] = t.row;
    return g;
  }
};

/// Iterative Tarjan.  Returns the first strongly connected component found,
/// which equals the whole vertex set iff the graph is strongly connected.
inline std::vector<std::int64_t> first_scc(const TypeGraph& g, std::int64_t n) {
  constexpr std::int32_t kUnvisited = -1;
  std::vector<std::int32_t> index(static_cast<std::size_t>(n), kUnvisited);
  std::vector<std::int32_t> lowlink(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<std::int32_t> stack;
  struct Frame {
    std::int32_t node;
    std::int64_t edge;
  };
  std::vector<Frame> dfs;
  std::int32_t next_index = 0;

  for (std::int64_t root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != kUnvisited) continue;
    dfs.push_back({static_cast<std::int32_t>(root), g.offsets[static_cast<std::size_t>(root)]});
    index[static_cast<std::size_t>(root)] = lowlink[static_cast<std::size_t>(root)] = next_index++;
    stack.push_back(static_cast<std::int32_t>(root));
    on_stack[static_cast<std::size_t>(root)] = true;
    while (!dfs.empty()) {
      Frame& f = dfs.back();
      const auto u = static_cast<std::size_t>(f.node);
      if (f.edge < g.offsets[u + 1]) {
        const std::int32_t v = g.heads[static_cast<std::size_t>(f.edge++)];
        const auto vi = static_cast<std::size_t>(v);
        if (index[vi] == kUnvisited) {
          index[vi] = lowlink[vi] = next_index++;
          stack.push_back(v);
          on_stack[vi] = true;
          dfs.push_back({v, g.offsets[vi]});
        } else if (on_stack[vi]) {
          lowlink[u] = std::min(lowlink[u], index[vi]);
        }
      } else {
        if (lowlink[u] == index[u]) {
          std::vector<std::int64_t> comp;
          while (true) {
            const std::int32_t w = stack.back();
            stack.pop_back();
            on_stack[static_cast<std::size_t>(w)] = false;
            comp.push_back(w);
            if (w == f.node) break;
          }
          return comp; // first complete component decides the question
        }
        const std::int32_t done = f.node;
        dfs.pop_back();
        if (!dfs.empty()) {
          const auto p = static_cast<std::size_t>(dfs.back().node);
          lowlink[p] = std::min(lowlink[p], lowlink[static_cast<std::size_t>(done)]);
        }
      }
    }
  }
  return {};
}

/// Period of a strongly connected digraph: gcd over all edges (u,v) of
/// dist(u) + 1 - dist(v), with dist taken from a BFS tree rooted at 0.
inline std::int64_t graph_period(const TypeGraph& g, std::int64_t n) {
  std::vector<std::int64_t> dist(static_cast<std::size_t>(n), -1);
  std::vector<std::int32_t> queue;
  queue.reserve(static_cast<std::size_t>(n));
  queue.push_back(0);
  dist[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto u = static_cast<std::size_t>(queue[head]);
    for (std::int64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
      const std::int32_t v = g.heads[static_cast<std::size_t>(e)];
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  std::int64_t period = 0;
  for (std::size_t u = 0; u < static_cast<std::size_t>(n); ++u) {
    for (std::int64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
      const auto v = static_cast<std::size_t>(g.heads[static_cast<std::size_t>(e)]);
      const std::int64_t d = dist[u] + 1 - dist[v];
      period = std::gcd(period, d < 0 ? -d : d);
    }
  }
  return period == 0 ? 1 : period;
}

} // namespace detail

/// Full structural validation: triplet ordering and bounds, at least one
/// predecessor per type, strong connectivity and aperiodicity of the
/// successor graph.  Throws a diagnosable error on the first violation.
inline void validate(const TypeSystem& ts) {
  if (ts.type_count < 1) throw Error("type_count must be positive");
  if (ts.degree < 1) throw Error("degree must be positive");
  if (ts.degree > (std::int64_t{1} << 31)) throw Error("degree exceeds 2^31");
  if (!ts.labels.empty() && static_cast<std::int64_t>(ts.labels.size()) != ts.type_count)
    throw Error("labels must be empty or have one entry per type");
  const Triplet* prev = nullptr;
  for (const Triplet& t : ts.successors) {
    if (t.count < 1) throw Error("stored successor counts must be >= 1");
    if (t.row < 0 || t.row >= ts.type_count || t.col < 0 || t.col >= ts.type_count)
      throw Error("triplet index out of range");
    if (prev && (t.col < prev->col || (t.col == prev->col && t.row <= prev->row)))
      throw Error("triplets must be strictly sorted by (col, row)");
    prev = &t;
  }
  const auto sums = column_sums(ts);
  for (std::int64_t j = 0; j < ts.type_count; ++j)
    if (ts.degree - sums[static_cast<std::size_t>(j)] < 1) throw NonPositivePredecessor(j);

  const auto graph = detail::TypeGraph::build(ts);
  auto comp = detail::first_scc(graph, ts.type_count);
  if (static_cast<std::int64_t>(comp.size()) != ts.type_count) {
    if (comp.size() > 16) comp.resize(16);
    throw NotIrreducible(std::move(comp));
  }
  const std::int64_t period = detail::graph_period(graph, ts.type_count);
  if (period != 1) throw NotAperiodic(period);
}

/// Row-rescaled matrix with entries M_ij / p_i on the sparsity pattern of the
/// successor matrix.
inline std::vector<SparseEntry> tilde_matrix(const TypeSystem& ts) {
  const auto p = predecessors(ts).counts;
  std::vector<SparseEntry> out;
  out.reserve(ts.successors.size());
  for (const Triplet& t : ts.successors)
    out.push_back({t.row, t.col,
                   static_cast<double>(t.count) /
                       static_cast<double>(p[static_cast<std::size_t>(t.row)])});
  return out;
}

} // namespace conewalk
