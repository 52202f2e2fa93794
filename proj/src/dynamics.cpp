#include "moran/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace moran {

MutantState::MutantState(std::uint32_t n) : n_(n), verts_(n), pos_(n) {
  if (n == 0) throw std::invalid_argument("mutant state: empty graph");
  for (std::uint32_t i = 0; i < n; ++i) {
    verts_[i] = i;
    pos_[i] = i;
  }
}

MutantState::MutantState(std::uint32_t n, std::span<const VertexId> mutants) : MutantState(n) {
  for (VertexId x : mutants) {
    if (x >= n_) {
      throw std::invalid_argument("mutant state: vertex " + std::to_string(x) + " out of range");
    }
    if (is_mutant(x)) {
      throw std::invalid_argument("mutant state: duplicate vertex " + std::to_string(x));
    }
    set_mutant(x);
  }
}

void MutantState::set_mutant(VertexId x) {
  const std::uint32_t i = pos_[x];
  if (i < k_) return;
  const VertexId other = verts_[k_];
  verts_[k_] = x;
  verts_[i] = other;
  pos_[x] = k_;
  pos_[other] = i;
  ++k_;
}

void MutantState::set_nonmutant(VertexId x) {
  const std::uint32_t i = pos_[x];
  if (i >= k_) return;
  --k_;
  const VertexId other = verts_[k_];
  verts_[k_] = x;
  verts_[i] = other;
  pos_[x] = k_;
  pos_[other] = i;
}

StepEvent step(const Graph& g, MutantState& state, double r, RngStream& rng) {
  StepEvent ev;
  if (state.absorbing()) return ev;

  const std::uint32_t n = state.order();
  const std::uint32_t k = state.mutant_count();
  const double w = state.total_fitness(r);

  // Pick the reproducer fitness-proportionally: the mutant side carries weight
  // r*k out of W, and both sides are internally uniform.
  const double u = rng.next_unit() * w;
  VertexId reproducer;
  bool reproducer_mutant;
  if (u < r * static_cast<double>(k)) {
    reproducer = state.vertex_at(rng.next_below(k));
    reproducer_mutant = true;
  } else {
    reproducer = state.vertex_at(k + rng.next_below(n - k));
    reproducer_mutant = false;
  }

  const auto nbrs = g.neighbors(reproducer);
  const VertexId target = nbrs[rng.next_below(static_cast<std::uint32_t>(nbrs.size()))];

  ev.reproducer = reproducer;
  ev.target = target;
  ev.target_is_mutant_now = reproducer_mutant;
  ev.changed = state.is_mutant(target) != reproducer_mutant;
  if (ev.changed) {
    if (reproducer_mutant) {
      state.set_mutant(target);
    } else {
      state.set_nonmutant(target);
    }
  }
  return ev;
}

TrajectoryResult run_to_absorption(const Graph& g, VertexId start, double r, RngStream& rng,
                                   std::uint64_t max_steps) {
  if (start >= g.order()) {
    throw std::invalid_argument("trajectory: start vertex " + std::to_string(start) +
                                " out of range");
  }
  if (r <= 0.0) {
    throw std::invalid_argument("trajectory: fitness must be positive");
  }
  const VertexId starts[] = {start};
  MutantState state(g.order(), starts);

  TrajectoryResult result;
  result.start_vertex = start;
  while (!state.absorbing() && result.steps_taken < max_steps) {
    step(g, state, r, rng);
    ++result.steps_taken;
  }
  if (state.absorbing()) {
    result.outcome = state.mutant_count() == g.order() ? Outcome::Fixation : Outcome::Extinction;
  } else {
    result.outcome = Outcome::Truncated;
  }
  return result;
}

namespace {

std::vector<std::uint8_t> subset_flags(const Graph& g, std::span<const VertexId> mutants,
                                       const char* who) {
  if (mutants.empty()) {
    throw std::invalid_argument(std::string(who) + ": subset must be non-empty");
  }
  if (mutants.size() >= g.order()) {
    throw std::invalid_argument(std::string(who) + ": subset must be proper");
  }
  std::vector<std::uint8_t> flags(g.order(), 0);
  for (VertexId x : mutants) {
    if (x >= g.order()) {
      throw std::invalid_argument(std::string(who) + ": vertex " + std::to_string(x) +
                                  " out of range");
    }
    if (flags[x]) {
      throw std::invalid_argument(std::string(who) + ": duplicate vertex " + std::to_string(x));
    }
    flags[x] = 1;
  }
  return flags;
}

}  // namespace

double expected_drift(const Graph& g, std::span<const VertexId> mutants, double r) {
  const auto flags = subset_flags(g, mutants, "expected_drift");
  double cut_sum = 0.0;
  for (VertexId x : mutants) {
    for (VertexId y : g.neighbors(x)) {
      if (!flags[y]) cut_sum += g.inv_degree(x) * g.inv_degree(y);
    }
  }
  const double w = total_fitness(g, mutants, r);
  return (r - 1.0) / w * cut_sum;
}

DriftEstimate empirical_drift(const Graph& g, std::span<const VertexId> mutants, double r,
                              std::uint64_t trials, RngStream& rng) {
  subset_flags(g, mutants, "empirical_drift");
  MutantState state(g.order(), mutants);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const StepEvent ev = step(g, state, r, rng);
    double delta = 0.0;
    if (ev.changed) {
      delta = ev.target_is_mutant_now ? g.inv_degree(ev.target) : -g.inv_degree(ev.target);
      // Undo the flip so every trial starts from the same state.
      if (ev.target_is_mutant_now) {
        state.set_nonmutant(ev.target);
      } else {
        state.set_mutant(ev.target);
      }
    }
    sum += delta;
    sum_sq += delta * delta;
  }

  DriftEstimate est;
  est.trials = trials;
  if (trials > 0) {
    const auto count = static_cast<double>(trials);
    est.mean = sum / count;
    if (trials > 1) {
      const double var = (sum_sq - sum * sum / count) / (count - 1.0);
      est.std_error = std::sqrt(std::max(var, 0.0) / count);
    }
  }
  return est;
}

}  // namespace moran
