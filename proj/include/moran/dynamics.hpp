#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "moran/graph.hpp"
#include "moran/rng.hpp"

namespace moran {

// One reproduction event: a reproducer is chosen with probability proportional
// to fitness (mutants have fitness r, residents 1), then one of its neighbours
// is replaced by a copy of the reproducer, chosen uniformly.
struct StepEvent {
  VertexId reproducer = 0;
  VertexId target = 0;
  bool changed = false;              // target's type differed from the reproducer's
  bool target_is_mutant_now = false;  // target's type after the event
};

enum class Outcome : std::uint8_t {
  Fixation,    // mutants occupy every vertex
  Extinction,  // mutants occupy no vertex
  Truncated,   // step cap reached before absorption
};

struct TrajectoryResult {
  Outcome outcome = Outcome::Truncated;
  std::uint64_t steps_taken = 0;
  VertexId start_vertex = 0;
};

// Current mutant set over a fixed graph. Vertices live in a permutation array
// whose first k entries are the mutants, so membership tests, uniform indexing
// into either side, and flipping a vertex are all O(1).
class MutantState {
 public:
  explicit MutantState(std::uint32_t n);
  MutantState(std::uint32_t n, std::span<const VertexId> mutants);

  std::uint32_t order() const { return n_; }
  std::uint32_t mutant_count() const { return k_; }
  bool is_mutant(VertexId x) const { return pos_[x] < k_; }

  // Mutant i for i < mutant_count(); non-mutant j at index mutant_count()+j.
  VertexId vertex_at(std::uint32_t index) const { return verts_[index]; }

  void set_mutant(VertexId x);
  void set_nonmutant(VertexId x);

  bool absorbing() const { return k_ == 0 || k_ == n_; }
  double total_fitness(double r) const {
    return static_cast<double>(n_) + (r - 1.0) * static_cast<double>(k_);
  }

 private:
  std::uint32_t n_;
  std::uint32_t k_ = 0;
  std::vector<VertexId> verts_;   // permutation of 0..n-1, mutants first
  std::vector<std::uint32_t> pos_;  // pos_[v] = index of v in verts_
};

// Advances the state by one reproduction event. An absorbing state is a fixed
// point: no randomness is consumed and the returned event has changed=false.
StepEvent step(const Graph& g, MutantState& state, double r, RngStream& rng);

inline constexpr std::uint64_t kUnlimitedSteps = std::numeric_limits<std::uint64_t>::max();

// Runs from a single mutant at `start` until absorption or until `max_steps`
// events have been applied, whichever comes first.
TrajectoryResult run_to_absorption(const Graph& g, VertexId start, double r, RngStream& rng,
                                   std::uint64_t max_steps = kUnlimitedSteps);

// Expected one-step change of the degree-weighted potential for the given
// mutant set: (r-1)/W(S) * sum over cut edges xy of 1/(deg x * deg y).
// The subset must be proper, non-empty, and free of duplicates.
double expected_drift(const Graph& g, std::span<const VertexId> mutants, double r);

struct DriftEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Monte Carlo check of expected_drift: repeatedly applies one step to a fresh
// copy of the given state and averages the observed potential change.
DriftEstimate empirical_drift(const Graph& g, std::span<const VertexId> mutants, double r,
                              std::uint64_t trials, RngStream& rng);

}  // namespace moran
