#include "moran/estimator.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "moran/dynamics.hpp"
#include "moran/exact.hpp"
#include "moran/rng.hpp"

namespace moran {

namespace {

constexpr double kSaturationLimit = 1.8e19;  // just below 2^64

std::uint64_t ceil_to_u64(double value) {
  if (!(value >= 0.0)) {
    throw std::invalid_argument("estimator plan: budget underflow");
  }
  if (value >= kSaturationLimit) {
    return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(std::ceil(value));
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return p > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(p);
}

void check_mode(EstimateMode mode, double r) {
  if (r <= 0.0) {
    throw std::invalid_argument("estimator: fitness must be positive");
  }
  if (mode == EstimateMode::Fixation && r < 1.0 && !is_unit_fitness(r)) {
    throw std::invalid_argument(
        "estimator: fixation estimation with r < 1 has no known certified sampling plan; "
        "run extinction mode instead");
  }
}

}  // namespace

EstimatorPlan plan(const Graph& g, EstimateMode mode, double r, double epsilon,
                   std::uint64_t master_seed) {
  check_mode(mode, r);
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("estimator: epsilon must lie in (0, 1)");
  }

  const double n = static_cast<double>(g.order());
  const double ln16 = std::log(16.0);
  const double base = mode == EstimateMode::Fixation ? n * n : (r + n) * (r + n);

  EstimatorPlan p;
  p.mode = mode;
  p.r = r;
  p.epsilon = epsilon;
  p.master_seed = master_seed;
  p.replicates = ceil_to_u64(0.5 * base * ln16 / (epsilon * epsilon));

  const std::uint64_t nu = g.order();
  if (is_unit_fitness(r)) {
    const std::uint64_t n2 = saturating_mul(nu, nu);
    const std::uint64_t n6 = saturating_mul(n2, saturating_mul(n2, n2));
    p.step_cap = saturating_mul(8, saturating_mul(p.replicates, n6));
  } else if (r > 1.0) {
    const double n4 = n * n * n * n;
    p.step_cap = ceil_to_u64((8.0 * r / (r - 1.0)) * static_cast<double>(p.replicates) * n4);
  } else {
    const double n3 = n * n * n;
    p.step_cap = ceil_to_u64((8.0 / (1.0 - r)) * static_cast<double>(p.replicates) * n3);
  }
  return p;
}

EstimateReport estimate(const Graph& g, const EstimatorPlan& p, unsigned workers) {
  check_mode(p.mode, p.r);
  if (p.replicates == 0) {
    throw std::invalid_argument("estimator: plan has zero replicates");
  }

  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
  }
  const std::uint64_t n_reps = p.replicates;
  if (workers > n_reps) workers = static_cast<unsigned>(n_reps);

  const Outcome wanted =
      p.mode == EstimateMode::Fixation ? Outcome::Fixation : Outcome::Extinction;

  struct Tally {
    std::uint64_t successes = 0;
    std::uint64_t truncated = 0;
  };
  std::vector<Tally> tallies(workers);
  std::atomic<std::uint64_t> next_index{0};

  auto worker_loop = [&](Tally& tally) {
    for (;;) {
      const std::uint64_t i = next_index.fetch_add(1, std::memory_order_relaxed);
      if (i >= n_reps) break;
      RngStream rng(p.master_seed, i);
      const VertexId start = rng.next_below(g.order());
      const TrajectoryResult tr = run_to_absorption(g, start, p.r, rng, p.step_cap);
      if (tr.outcome == wanted) ++tally.successes;
      if (tr.outcome == Outcome::Truncated) ++tally.truncated;
    }
  };

  if (workers == 1) {
    worker_loop(tallies[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker_loop, std::ref(tallies[w]));
    for (auto& t : pool) t.join();
  }

  EstimateReport report;
  report.replicates = n_reps;
  report.master_seed = p.master_seed;
  for (const Tally& t : tallies) {
    report.successes += t.successes;
    report.truncated_runs += t.truncated;
  }
  report.estimate = static_cast<double>(report.successes) / static_cast<double>(n_reps);
  report.status = report.truncated_runs > 0 ? EstimateStatus::Aborted : EstimateStatus::Ok;
  return report;
}

double hoeffding_error_bound(std::uint64_t replicates, double epsilon, double f_lower) {
  if (replicates == 0) {
    throw std::invalid_argument("hoeffding bound: replicate count must be positive");
  }
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("hoeffding bound: epsilon must be non-negative");
  }
  if (!(f_lower > 0.0) || f_lower > 1.0) {
    throw std::invalid_argument("hoeffding bound: f_lower must lie in (0, 1]");
  }
  const double exponent =
      -2.0 * epsilon * epsilon * f_lower * f_lower * static_cast<double>(replicates);
  return 2.0 * std::exp(exponent);
}

}  // namespace moran
