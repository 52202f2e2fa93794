#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "moran/graph.hpp"
#include "moran/rng.hpp"

namespace testsupport {

// Seed for the shared random-graph corpus; fixed so every suite sees the
// same graphs.
inline constexpr std::uint64_t kCorpusSeed = 20260819ULL;

// Random recursive tree plus independent extra edges: always connected,
// simple, n >= 2.
moran::Graph random_connected_graph(std::uint32_t n, moran::RngStream& rng,
                                    double extra_edge_prob = 0.3);

// `count` random connected graphs with sizes cycling through [min_n, max_n].
std::vector<moran::Graph> random_corpus(std::size_t count, std::uint32_t min_n,
                                        std::uint32_t max_n, std::uint64_t seed);

// Every generator family at every valid size in [min_n, max_n].
std::vector<moran::Graph> generator_corpus(std::uint32_t min_n, std::uint32_t max_n);

// Fixation probabilities for every mutant-set bitmask, computed by
// Gauss-Seidel value iteration on the raw step distribution (reproducer and
// offspring enumerated directly, lazy self-transitions included). Shares no
// code with the production solver; used as the independent oracle.
std::vector<double> oracle_fixation_by_mask(const moran::Graph& g, double r, double tol = 1e-13);

double oracle_average(const moran::Graph& g, double r);

std::vector<moran::VertexId> mask_to_subset(std::uint32_t mask);

inline double binomial_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

// Subprocess driver for CLI tests. The binary path comes from --cli=<path>
// (stripped by the test main) or the MORAN_CLI environment variable.
struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

extern std::string g_cli_path;

CliResult run_cli(const std::string& args);

// Per-process scratch directory, created on first use.
std::string temp_dir();

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace testsupport
