#include "moran/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

namespace moran {

namespace {

void check_solver_args(const Graph& g, double r, std::uint32_t cap) {
  if (r <= 0.0) {
    throw std::invalid_argument("exact solver: fitness must be positive");
  }
  if (g.order() > cap) {
    throw StateSpaceCapExceeded(g.order(), cap);
  }
}

ExactResult result_from_masks(const Graph& g, std::vector<double> f_by_mask) {
  ExactResult res;
  res.per_vertex.resize(g.order());
  double sum = 0.0;
  for (VertexId x = 0; x < g.order(); ++x) {
    res.per_vertex[x] = f_by_mask[1u << x];
    sum += res.per_vertex[x];
  }
  res.average = sum / static_cast<double>(g.order());
  res.f_by_mask = std::move(f_by_mask);
  return res;
}

}  // namespace

ExactResult fixation_exact(const Graph& g, double r, std::uint32_t cap) {
  check_solver_args(g, r, std::min(cap, 30u));
  const std::uint32_t n = g.order();
  const std::uint32_t full = (n == 32) ? ~0u : (1u << n) - 1;
  const std::size_t m = static_cast<std::size_t>(full) - 1;  // transient states

  // Rows ordered by mutant count so the matrix is near block-triangular.
  std::vector<std::uint32_t> masks;
  masks.reserve(m);
  for (std::uint32_t k = 1; k < n; ++k) {
    for (std::uint32_t s = 1; s < full; ++s) {
      if (static_cast<std::uint32_t>(std::popcount(s)) == k) masks.push_back(s);
    }
  }
  std::vector<std::uint32_t> row_of(static_cast<std::size_t>(full) + 1, 0);
  for (std::size_t i = 0; i < m; ++i) row_of[masks[i]] = static_cast<std::uint32_t>(i);

  // Conditioned on leaving the state, f(S) solves
  //   move_mass(S) f(S) - sum over reachable transient T of p(S->T) f(T) = p(S->full).
  std::vector<double> a(m * m, 0.0);
  std::vector<double> b(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint32_t s = masks[i];
    const std::uint32_t k = static_cast<std::uint32_t>(std::popcount(s));
    const double w = r * k + static_cast<double>(n - k);
    double* row = a.data() + i * m;
    double move_mass = 0.0;
    for (std::uint32_t x = 0; x < n; ++x) {
      if (!(s & (1u << x))) continue;
      for (VertexId y : g.neighbors(x)) {
        if (s & (1u << y)) continue;
        const double p_add = (r / w) * g.inv_degree(x);
        const double p_rem = (1.0 / w) * g.inv_degree(y);
        move_mass += p_add + p_rem;
        const std::uint32_t added = s | (1u << y);
        if (added == full) {
          b[i] += p_add;
        } else {
          row[row_of[added]] -= p_add;
        }
        const std::uint32_t removed = s & ~(1u << x);
        if (removed != 0) {
          row[row_of[removed]] -= p_rem;
        }
      }
    }
    row[i] += move_mass;
  }

  // Gaussian elimination with partial pivoting, then back substitution.
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * m + col]);
    for (std::size_t i = col + 1; i < m; ++i) {
      const double v = std::abs(a[i * m + col]);
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) {
      throw std::runtime_error("exact solver: singular system");
    }
    if (pivot != col) {
      for (std::size_t j = col; j < m; ++j) std::swap(a[col * m + j], a[pivot * m + j]);
      std::swap(b[col], b[pivot]);
    }
    const double inv_p = 1.0 / a[col * m + col];
    for (std::size_t i = col + 1; i < m; ++i) {
      const double factor = a[i * m + col] * inv_p;
      if (factor == 0.0) continue;
      a[i * m + col] = 0.0;
      for (std::size_t j = col + 1; j < m; ++j) a[i * m + j] -= factor * a[col * m + j];
      b[i] -= factor * b[col];
    }
  }
  std::vector<double> sol(m, 0.0);
  for (std::size_t ii = m; ii-- > 0;) {
    double acc = b[ii];
    const double* row = a.data() + ii * m;
    for (std::size_t j = ii + 1; j < m; ++j) acc -= row[j] * sol[j];
    sol[ii] = acc / row[ii];
  }

  std::vector<double> f(static_cast<std::size_t>(full) + 1, 0.0);
  f[full] = 1.0;
  for (std::size_t i = 0; i < m; ++i) f[masks[i]] = sol[i];
  return result_from_masks(g, std::move(f));
}

ExactResult fixation_iterative(const Graph& g, double r, std::uint32_t cap, double tol,
                               std::uint64_t max_sweeps) {
  check_solver_args(g, r, std::min(cap, 30u));
  const std::uint32_t n = g.order();
  const std::uint32_t full = (1u << n) - 1;

  std::vector<double> f(static_cast<std::size_t>(full) + 1, 0.0);
  f[full] = 1.0;

  for (std::uint64_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (std::uint32_t s = 1; s < full; ++s) {
      // W(S) cancels between the transition weights and the conditioning
      // mass, so the sweep works with unnormalized rates.
      double move_mass = 0.0;
      double acc = 0.0;
      for (std::uint32_t x = 0; x < n; ++x) {
        if (!(s & (1u << x))) continue;
        for (VertexId y : g.neighbors(x)) {
          if (s & (1u << y)) continue;
          const double p_add = r * g.inv_degree(x);
          const double p_rem = g.inv_degree(y);
          move_mass += p_add + p_rem;
          acc += p_add * f[s | (1u << y)] + p_rem * f[s & ~(1u << x)];
        }
      }
      const double next = acc / move_mass;
      max_delta = std::max(max_delta, std::abs(next - f[s]));
      f[s] = next;
    }
    if (max_delta < tol) break;
  }
  return result_from_masks(g, std::move(f));
}

double clique_closed_form(std::uint32_t n, double r) {
  if (n < 2) {
    throw std::invalid_argument("clique closed form: n must be at least 2");
  }
  if (r <= 0.0) {
    throw std::invalid_argument("clique closed form: fitness must be positive");
  }
  if (is_unit_fitness(r)) {
    return 1.0 / static_cast<double>(n);
  }
  return (1.0 - 1.0 / r) / (1.0 - std::pow(r, -static_cast<double>(n)));
}

double fixation_lower_bound(std::uint32_t n, double r) {
  if (n < 2) {
    throw std::invalid_argument("fixation lower bound: n must be at least 2");
  }
  if (r < 1.0 && !is_unit_fitness(r)) {
    throw std::invalid_argument(
        "fixation lower bound: requires r >= 1 (no polynomial lower bound holds for r < 1)");
  }
  return 1.0 / static_cast<double>(n);
}

UpperBounds fixation_upper_bound(const Graph& g, double r) {
  if (r <= 0.0) {
    throw std::invalid_argument("fixation upper bound: fitness must be positive");
  }
  const auto n = static_cast<double>(g.order());
  UpperBounds ub;
  ub.coarse = 1.0 - 1.0 / (n + r);
  double sum = 0.0;
  for (VertexId x = 0; x < g.order(); ++x) sum += 1.0 / (r + g.q_value(x));
  ub.refined = std::min((r / n) * sum, ub.coarse);
  return ub;
}

double absorption_time_bound(const Graph& g, double r) {
  if (r <= 0.0) {
    throw std::invalid_argument("absorption time bound: fitness must be positive");
  }
  const auto n = static_cast<double>(g.order());
  if (is_unit_fitness(r)) {
    const double phi = g.potential_total();
    return n * n * n * n * (phi * phi - g.phi_prime_0());
  }
  if (r < 1.0) {
    return n * n * n / (1.0 - r);
  }
  return (r / (r - 1.0)) * n * n * n * g.potential_total();
}

BoundsReport bounds_report(const Graph& g, double r) {
  BoundsReport rep;
  if (r >= 1.0 || is_unit_fitness(r)) {
    rep.lower = fixation_lower_bound(g.order(), r);
  }
  const UpperBounds ub = fixation_upper_bound(g, r);
  rep.upper_coarse = ub.coarse;
  rep.upper_refined = ub.refined;
  rep.abs_time_bound = absorption_time_bound(g, r);
  return rep;
}

}  // namespace moran
