#include "moran/graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

namespace moran {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

VertexId parse_vertex(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || value >= std::numeric_limits<VertexId>::max()) {
    throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                ": invalid vertex id '" + std::string(token) + "'");
  }
  return static_cast<VertexId>(value);
}

}  // namespace

Graph Graph::from_edges(std::vector<std::pair<VertexId, VertexId>> edges) {
  if (edges.empty()) {
    throw std::invalid_argument("graph: empty edge list (need at least 2 vertices)");
  }

  VertexId max_id = 0;
  for (auto& [u, v] : edges) {
    if (u == v) {
      throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(u));
    }
    if (u > v) std::swap(u, v);
    max_id = std::max(max_id, v);
  }
  if (max_id == std::numeric_limits<VertexId>::max()) {
    throw std::invalid_argument("graph: vertex id out of range");
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.n_ = max_id + 1;

  std::vector<std::uint32_t> deg(g.n_, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  for (VertexId x = 0; x < g.n_; ++x) {
    if (deg[x] == 0) {
      throw std::invalid_argument("graph: disconnected (vertex " + std::to_string(x) +
                                  " is isolated)");
    }
  }

  g.offsets_.assign(g.n_ + 1, 0);
  for (VertexId x = 0; x < g.n_; ++x) g.offsets_[x + 1] = g.offsets_[x] + deg[x];
  g.adjacency_.resize(g.offsets_[g.n_]);

  std::vector<std::uint32_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  for (VertexId x = 0; x < g.n_; ++x) {
    std::sort(g.adjacency_.begin() + g.offsets_[x], g.adjacency_.begin() + g.offsets_[x + 1]);
  }

  // BFS from vertex 0; every vertex must be reachable.
  std::vector<std::uint8_t> seen(g.n_, 0);
  std::vector<VertexId> queue;
  queue.reserve(g.n_);
  queue.push_back(0);
  seen[0] = 1;
  std::uint32_t reached = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (VertexId y : g.neighbors(queue[head])) {
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        queue.push_back(y);
      }
    }
  }
  if (reached != g.n_) {
    throw std::invalid_argument("graph: disconnected (reached " + std::to_string(reached) +
                                " of " + std::to_string(g.n_) + " vertices from vertex 0)");
  }

  g.inv_degree_.resize(g.n_);
  for (VertexId x = 0; x < g.n_; ++x) g.inv_degree_[x] = 1.0 / static_cast<double>(deg[x]);
  return g;
}

Graph Graph::parse_edge_list(std::string_view text) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens.size() != 2) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": expected 'u v'");
    }
    const VertexId u = parse_vertex(tokens[0], line_no);
    const VertexId v = parse_vertex(tokens[1], line_no);
    if (u == v) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": self-loop at vertex " + std::to_string(u));
    }
    edges.emplace_back(u, v);
  }
  if (edges.empty()) {
    throw std::invalid_argument("edge list: no edges found");
  }
  return from_edges(std::move(edges));
}

std::string Graph::to_edge_list() const {
  std::string out;
  for (VertexId u = 0; u < n_; ++u) {
    for (VertexId v : neighbors(u)) {
      if (v > u) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
      }
    }
  }
  return out;
}

double Graph::potential_total() const {
  double sum = 0.0;
  for (double inv : inv_degree_) sum += inv;
  return sum;
}

double Graph::phi_prime_0() const {
  double sum = 0.0;
  for (double inv : inv_degree_) sum += inv * inv;
  return sum / static_cast<double>(n_);
}

double Graph::q_value(VertexId x) const {
  double sum = 0.0;
  for (VertexId y : neighbors(x)) sum += inv_degree_[y];
  return sum;
}

namespace {

Graph build(std::vector<std::pair<VertexId, VertexId>> edges) {
  return Graph::from_edges(std::move(edges));
}

void require_min(std::uint32_t n, std::uint32_t min, const char* kind) {
  if (n < min) {
    throw std::invalid_argument(std::string(kind) + " requires n >= " + std::to_string(min) +
                                ", got " + std::to_string(n));
  }
}

}  // namespace

Graph gen_clique(std::uint32_t n) {
  require_min(n, 2, "clique");
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return build(std::move(edges));
}

Graph gen_cycle(std::uint32_t n) {
  require_min(n, 3, "cycle");
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(n);
  for (VertexId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  edges.emplace_back(0, n - 1);
  return build(std::move(edges));
}

Graph gen_path(std::uint32_t n) {
  require_min(n, 2, "path");
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(n - 1);
  for (VertexId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return build(std::move(edges));
}

Graph gen_star(std::uint32_t n) {
  require_min(n, 2, "star");
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(n - 1);
  for (VertexId v = 1; v < n; ++v) edges.emplace_back(0, v);
  return build(std::move(edges));
}

Graph gen_double_star(std::uint32_t n) {
  require_min(n, 4, "double-star");
  const std::uint32_t first = (n - 1) / 2;  // ceil((n-2)/2) leaves on centre 0
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(n - 1);
  edges.emplace_back(0, 1);
  for (VertexId v = 2; v < 2 + first; ++v) edges.emplace_back(0, v);
  for (VertexId v = 2 + first; v < n; ++v) edges.emplace_back(1, v);
  return build(std::move(edges));
}

double total_fitness(const Graph& g, std::span<const VertexId> mutants, double r) {
  for (VertexId x : mutants) {
    if (x >= g.order()) {
      throw std::invalid_argument("total_fitness: vertex " + std::to_string(x) + " out of range");
    }
  }
  const auto k = static_cast<double>(mutants.size());
  return r * k + (static_cast<double>(g.order()) - k);
}

double potential(const Graph& g, std::span<const VertexId> subset) {
  double sum = 0.0;
  for (VertexId x : subset) {
    if (x >= g.order()) {
      throw std::invalid_argument("potential: vertex " + std::to_string(x) + " out of range");
    }
    sum += g.inv_degree(x);
  }
  return sum;
}

}  // namespace moran
