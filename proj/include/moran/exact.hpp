#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moran/graph.hpp"

namespace moran {

// Fixation probabilities from the full absorbing-chain linear system over all
// 2^n mutant-set states. f_by_mask[m] is the fixation probability from the
// state whose mutant set is the bitmask m, so f_by_mask[0] = 0 and
// f_by_mask[2^n - 1] = 1.
struct ExactResult {
  std::vector<double> per_vertex;
  double average = 0.0;
  std::vector<double> f_by_mask;
};

inline constexpr std::uint32_t kDefaultExactCap = 14;

class StateSpaceCapExceeded : public std::runtime_error {
 public:
  StateSpaceCapExceeded(std::uint32_t n, std::uint32_t cap)
      : std::runtime_error("exact solver: n = " + std::to_string(n) + " exceeds cap " +
                           std::to_string(cap) + " (state space 2^n)") {}
};

// Treats fitness values within 1e-12 of 1 as the neutral case, where several
// closed forms and budgets switch to their r = 1 limits.
inline bool is_unit_fitness(double r) { return r > 1.0 - 1e-12 && r < 1.0 + 1e-12; }

// Dense solve by Gaussian elimination with partial pivoting, state space
// ordered by mutant count. The default cap marks the practical dense limit.
ExactResult fixation_exact(const Graph& g, double r, std::uint32_t cap = kDefaultExactCap);

// Fixed-point sweep (Gauss-Seidel) fallback for experimenting above the dense
// cap. Converges geometrically; tol bounds the largest per-sweep change.
ExactResult fixation_iterative(const Graph& g, double r, std::uint32_t cap = 24,
                               double tol = 1e-12, std::uint64_t max_sweeps = 1000000);

// (1 - 1/r) / (1 - 1/r^n), with the continuous limit 1/n at r = 1.
double clique_closed_form(std::uint32_t n, double r);

// 1/n, valid for r >= 1 only; there is no corresponding polynomial lower
// bound when r < 1.
double fixation_lower_bound(std::uint32_t n, double r);

struct UpperBounds {
  double coarse = 0.0;   // 1 - 1/(n+r)
  double refined = 0.0;  // (r/n) sum_x 1/(r + Q(x)), never above coarse
};

UpperBounds fixation_upper_bound(const Graph& g, double r);

// Expected-absorption-time bound for the regime of r:
//   r < 1: n^3 / (1-r)
//   r > 1: (r/(r-1)) n^3 phi(G)
//   r = 1: n^4 (phi(G)^2 - phi'_0)
double absorption_time_bound(const Graph& g, double r);

struct BoundsReport {
  std::optional<double> lower;  // present only for r >= 1
  double upper_coarse = 0.0;
  double upper_refined = 0.0;
  double abs_time_bound = 0.0;
};

BoundsReport bounds_report(const Graph& g, double r);

}  // namespace moran
