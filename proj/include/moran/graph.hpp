#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace moran {

using VertexId = std::uint32_t;

/// Simple connected undirected graph with n >= 2 vertices.
///
/// Adjacency is stored in CSR form with sorted neighbour lists; degrees and
/// reciprocal degrees are precomputed at construction since every per-step
/// sampling path and per-run budget consumes them. Instances are immutable
/// after construction and safe to share across threads.
class Graph {
 public:
  /// Builds a validated graph from an edge list. Vertex ids are dense and
  /// 0-based; the order is (max id) + 1. Duplicate edges collapse to one.
  /// Throws std::invalid_argument on self-loops, fewer than two vertices,
  /// or a disconnected graph (an implied isolated vertex id counts as
  /// disconnection).
  static Graph from_edges(std::vector<std::pair<VertexId, VertexId>> edges);

  /// Parses edge-list text: one "u v" pair of non-negative integers per
  /// line, blank lines and lines starting with '#' ignored. Parse errors
  /// carry 1-based line numbers.
  static Graph parse_edge_list(std::string_view text);

  std::uint32_t order() const { return n_; }
  std::uint64_t edge_count() const { return adjacency_.size() / 2; }
  std::uint32_t degree(VertexId x) const { return offsets_[x + 1] - offsets_[x]; }
  double inv_degree(VertexId x) const { return inv_degree_[x]; }

  std::span<const VertexId> neighbors(VertexId x) const {
    return {adjacency_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }

  /// Canonical edge-list text: one "u v" line per edge with u < v, pairs
  /// ascending, LF line endings. Re-parsing reproduces this graph exactly.
  std::string to_edge_list() const;

  /// phi(G) = sum over vertices of 1/deg(x).
  double potential_total() const;

  /// (1/n) * sum over vertices of deg(x)^-2.
  double phi_prime_0() const;

  /// Q(x) = sum over neighbours y of 1/deg(y). Summed over all x this is n.
  double q_value(VertexId x) const;

 private:
  Graph() = default;

  std::uint32_t n_ = 0;
  std::vector<std::uint32_t> offsets_;
  std::vector<VertexId> adjacency_;
  std::vector<double> inv_degree_;
};

Graph gen_clique(std::uint32_t n);   // n >= 2
Graph gen_cycle(std::uint32_t n);    // n >= 3
Graph gen_path(std::uint32_t n);     // n >= 2
Graph gen_star(std::uint32_t n);     // n >= 2, centre at vertex 0

/// Two disjoint stars of as-close-to-equal size as possible joined by an
/// edge between their centres. Centres are vertices 0 and 1; for odd n the
/// larger star sits at vertex 0. Requires n >= 4.
Graph gen_double_star(std::uint32_t n);

/// Total fitness W(X) = r|X| + (n - |X|) of a population with mutant set X.
double total_fitness(const Graph& g, std::span<const VertexId> mutants, double r);

/// Potential phi(X) = sum over x in X of 1/deg(x).
double potential(const Graph& g, std::span<const VertexId> subset);

}  // namespace moran
