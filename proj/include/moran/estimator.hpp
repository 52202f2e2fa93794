#pragma once

#include <cstdint>

#include "moran/graph.hpp"

namespace moran {

enum class EstimateMode : std::uint8_t { Fixation, Extinction };
enum class EstimateStatus : std::uint8_t { Ok, Aborted };

// Replicate count N and per-replicate step cap T for a relative-error target.
// A certified plan carries exactly the derived budgets; exploratory overrides
// must clear the flag so reports never masquerade as guaranteed.
struct EstimatorPlan {
  EstimateMode mode = EstimateMode::Fixation;
  double r = 1.0;
  double epsilon = 0.1;
  std::uint64_t replicates = 0;
  std::uint64_t step_cap = 0;
  std::uint64_t master_seed = 0;
  bool certified = true;
};

// Derives the certified plan:
//   fixation:   N = ceil(eps^-2 n^2 ln(16) / 2), requires r >= 1
//   extinction: N = ceil(eps^-2 (r+n)^2 ln(16) / 2), any r > 0
//   T = ceil((8r/(r-1)) N n^4) for r > 1, 8 N n^6 for r = 1,
//       ceil((8/(1-r)) N n^3) for r < 1 (extinction only)
// Budgets that overflow 64 bits saturate at the maximum representable value.
EstimatorPlan plan(const Graph& g, EstimateMode mode, double r, double epsilon,
                   std::uint64_t master_seed);

struct EstimateReport {
  double estimate = 0.0;  // successes / replicates; trustworthy only when Ok
  std::uint64_t successes = 0;
  std::uint64_t replicates = 0;
  std::uint64_t truncated_runs = 0;
  EstimateStatus status = EstimateStatus::Ok;
  std::uint64_t master_seed = 0;
};

// Runs the plan's replicates, each from a uniformly random start vertex drawn
// inside its own stream, and tallies outcomes matching the plan's mode. Any
// replicate hitting the step cap marks the whole report Aborted. The result
// is bit-identical for any worker count; workers = 0 picks the hardware
// concurrency.
EstimateReport estimate(const Graph& g, const EstimatorPlan& plan, unsigned workers = 0);

// 2 exp(-2 eps^2 f_lower^2 N): failure-probability bound for the proportion
// estimate assuming the true probability is at least f_lower. May exceed 1;
// callers cap it when reporting.
double hoeffding_error_bound(std::uint64_t replicates, double epsilon, double f_lower);

}  // namespace moran
