#include "support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace testsupport {

moran::Graph random_connected_graph(std::uint32_t n, moran::RngStream& rng,
                                    double extra_edge_prob) {
  if (n < 2) {
    throw std::invalid_argument("random graph: n must be at least 2");
  }
  std::vector<std::pair<moran::VertexId, moran::VertexId>> edges;
  std::vector<std::uint8_t> in_tree(static_cast<std::size_t>(n) * n, 0);
  auto mark = [&](moran::VertexId u, moran::VertexId v) {
    in_tree[static_cast<std::size_t>(u) * n + v] = 1;
    in_tree[static_cast<std::size_t>(v) * n + u] = 1;
  };
  for (moran::VertexId v = 1; v < n; ++v) {
    const moran::VertexId parent = rng.next_below(v);
    edges.emplace_back(parent, v);
    mark(parent, v);
  }
  for (moran::VertexId u = 0; u < n; ++u) {
    for (moran::VertexId v = u + 1; v < n; ++v) {
      if (in_tree[static_cast<std::size_t>(u) * n + v]) continue;
      if (rng.next_unit() < extra_edge_prob) edges.emplace_back(u, v);
    }
  }
  return moran::Graph::from_edges(std::move(edges));
}

std::vector<moran::Graph> random_corpus(std::size_t count, std::uint32_t min_n,
                                        std::uint32_t max_n, std::uint64_t seed) {
  std::vector<moran::Graph> out;
  out.reserve(count);
  std::uint32_t n = min_n;
  for (std::size_t i = 0; i < count; ++i) {
    moran::RngStream rng(seed, i);
    out.push_back(random_connected_graph(n, rng));
    n = n == max_n ? min_n : n + 1;
  }
  return out;
}

std::vector<moran::Graph> generator_corpus(std::uint32_t min_n, std::uint32_t max_n) {
  std::vector<moran::Graph> out;
  for (std::uint32_t n = min_n; n <= max_n; ++n) {
    if (n >= 2) out.push_back(moran::gen_path(n));
    if (n >= 3) out.push_back(moran::gen_cycle(n));
    if (n >= 2) out.push_back(moran::gen_star(n));
    if (n >= 2) out.push_back(moran::gen_clique(n));
    if (n >= 4) out.push_back(moran::gen_double_star(n));
  }
  return out;
}

std::vector<double> oracle_fixation_by_mask(const moran::Graph& g, double r, double tol) {
  const std::uint32_t n = g.order();
  const std::uint32_t full = (1u << n) - 1;
  std::vector<double> f(static_cast<std::size_t>(full) + 1, 0.0);
  f[full] = 1.0;

  // f(S) = sum over reproducer x and neighbour y of
  //          (fitness(x)/W) (1/deg x) f(S with y set to x's type),
  // iterated in place until the sweep moves nothing by more than tol.
  const std::uint64_t max_sweeps = 40000000ULL / (static_cast<std::uint64_t>(full) + 1) + 1000;
  for (std::uint64_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (std::uint32_t s = 1; s < full; ++s) {
      const auto k = static_cast<std::uint32_t>(std::popcount(s));
      const double w = r * k + static_cast<double>(n - k);
      double acc = 0.0;
      for (std::uint32_t x = 0; x < n; ++x) {
        const bool x_mutant = (s >> x) & 1u;
        const double p_repro = (x_mutant ? r : 1.0) / w;
        for (moran::VertexId y : g.neighbors(x)) {
          const std::uint32_t t = x_mutant ? (s | (1u << y)) : (s & ~(1u << y));
          acc += p_repro * g.inv_degree(x) * f[t];
        }
      }
      max_delta = std::max(max_delta, std::abs(acc - f[s]));
      f[s] = acc;
    }
    if (max_delta < tol) break;
  }
  return f;
}

double oracle_average(const moran::Graph& g, double r) {
  const std::vector<double> f = oracle_fixation_by_mask(g, r);
  double sum = 0.0;
  for (moran::VertexId x = 0; x < g.order(); ++x) sum += f[1u << x];
  return sum / static_cast<double>(g.order());
}

std::vector<moran::VertexId> mask_to_subset(std::uint32_t mask) {
  std::vector<moran::VertexId> out;
  for (std::uint32_t x = 0; mask >> x; ++x) {
    if ((mask >> x) & 1u) out.push_back(x);
  }
  return out;
}

std::string g_cli_path;

std::string temp_dir() {
  static std::string dir = [] {
    const auto path = std::filesystem::temp_directory_path() /
                      ("moran_tests_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
    return path.string();
  }();
  return dir;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << content;
}

CliResult run_cli(const std::string& args) {
  std::string cli = g_cli_path;
  if (cli.empty()) {
    if (const char* env = std::getenv("MORAN_CLI")) cli = env;
  }
  if (cli.empty()) {
    throw std::runtime_error("CLI path not set; pass --cli=<path> or set MORAN_CLI");
  }
  static std::atomic<std::uint64_t> counter{0};
  const std::uint64_t id = counter.fetch_add(1);
  const std::string out_file = temp_dir() + "/out_" + std::to_string(id);
  const std::string err_file = temp_dir() + "/err_" + std::to_string(id);

  const std::string cmd = "\"" + cli + "\" " + args + " >" + out_file + " 2>" + err_file;
  const int raw = std::system(cmd.c_str());

  CliResult res;
  res.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  res.out = read_file(out_file);
  res.err = read_file(err_file);
  std::filesystem::remove(out_file);
  std::filesystem::remove(err_file);
  return res;
}

}  // namespace testsupport
