// Command-line front end: graph generation, exact solving, bound evaluation,
// trajectory simulation, drift evaluation, and certified estimation. JSON for
// single-result commands, CSV for per-replicate streams; every result embeds
// a manifest whose timestamp is the only non-deterministic field.

#include <charconv>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "moran/dynamics.hpp"
#include "moran/estimator.hpp"
#include "moran/exact.hpp"
#include "moran/graph.hpp"
#include "moran/rng.hpp"
#include "moran/version.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAborted = 3;
constexpr int kExitCapExceeded = 4;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

struct GraphArgs {
  std::string path;
  std::string gen_spec;

  void attach(CLI::App* cmd) {
    auto* opt_graph = cmd->add_option("--graph", path, "Edge-list file to load");
    auto* opt_gen = cmd->add_option(
        "--gen", gen_spec, "Generate a graph, e.g. clique:5, cycle:8, path:3, star:10, double-star:6");
    opt_graph->excludes(opt_gen);
    opt_gen->excludes(opt_graph);
  }

  std::string source() const { return path.empty() ? gen_spec : path; }

  moran::Graph load() const {
    if (path.empty() == gen_spec.empty()) {
      throw std::invalid_argument("exactly one of --graph and --gen is required");
    }
    if (!path.empty()) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        throw std::invalid_argument("cannot open graph file: " + path);
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      return moran::Graph::parse_edge_list(buf.str());
    }
    const auto colon = gen_spec.rfind(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("--gen expects kind:n, e.g. clique:5");
    }
    return make_generated(gen_spec.substr(0, colon), gen_spec.substr(colon + 1));
  }

  static moran::Graph make_generated(const std::string& kind, const std::string& n_text) {
    std::uint32_t n = 0;
    const char* begin = n_text.data();
    const char* end = begin + n_text.size();
    auto [ptr, ec] = std::from_chars(begin, end, n);
    if (ec != std::errc{} || ptr != end) {
      throw std::invalid_argument("invalid vertex count: " + n_text);
    }
    if (kind == "clique") return moran::gen_clique(n);
    if (kind == "cycle") return moran::gen_cycle(n);
    if (kind == "path") return moran::gen_path(n);
    if (kind == "star") return moran::gen_star(n);
    if (kind == "double-star") return moran::gen_double_star(n);
    throw std::invalid_argument("unknown graph kind: " + kind +
                                " (expected clique, cycle, path, star, or double-star)");
  }
};

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + out_path);
  }
  out << content;
  if (!out) {
    throw std::invalid_argument("failed writing output file: " + out_path);
  }
}

json make_manifest(const std::string& command, const std::string& graph_source,
                   std::optional<double> r, std::optional<double> epsilon,
                   std::optional<std::uint64_t> master_seed) {
  json m;
  m["command"] = command;
  m["graph_source"] = graph_source;
  if (r) m["r"] = *r;
  if (epsilon) m["epsilon"] = *epsilon;
  if (master_seed) m["master_seed"] = *master_seed;
  m["tool_version"] = moran::kToolVersion;
  m["timestamp"] = utc_timestamp();
  return m;
}

// Grammar: comma-separated vertex ids and inclusive dash ranges, "0,3,5-7".
std::vector<moran::VertexId> parse_subset(const std::string& spec) {
  std::vector<moran::VertexId> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) {
      throw std::invalid_argument("subset: empty item in '" + spec + "'");
    }
    const auto dash = item.find('-');
    auto parse_id = [&](const std::string& text) {
      std::uint32_t v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("subset: invalid vertex id '" + text + "'");
      }
      return v;
    };
    if (dash == std::string::npos) {
      out.push_back(parse_id(item));
    } else {
      const std::uint32_t lo = parse_id(item.substr(0, dash));
      const std::uint32_t hi = parse_id(item.substr(dash + 1));
      if (hi < lo) {
        throw std::invalid_argument("subset: descending range '" + item + "'");
      }
      for (std::uint32_t v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (comma == spec.size()) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

json bounds_json(const moran::Graph& g, double r) {
  const moran::BoundsReport b = moran::bounds_report(g, r);
  json j;
  j["lower"] = b.lower ? json(*b.lower) : json(nullptr);
  j["upper_coarse"] = b.upper_coarse;
  j["upper_refined"] = b.upper_refined;
  return j;
}

int cmd_gen(const std::string& kind, std::uint32_t n, const std::string& out_path) {
  const moran::Graph g = GraphArgs::make_generated(kind, std::to_string(n));
  write_output(out_path, g.to_edge_list());
  return kExitOk;
}

int cmd_exact(const GraphArgs& ga, double r, std::uint32_t cap, bool iterative,
              const std::string& out_path) {
  const moran::Graph g = ga.load();
  const moran::ExactResult res =
      iterative ? moran::fixation_iterative(g, r, cap) : moran::fixation_exact(g, r, cap);

  json doc;
  doc["manifest"] = make_manifest("exact", ga.source(), r, std::nullopt, std::nullopt);
  doc["n"] = g.order();
  doc["r"] = r;
  doc["solver"] = iterative ? "iterative" : "dense";
  doc["per_vertex"] = res.per_vertex;
  doc["average"] = res.average;
  doc["bounds"] = bounds_json(g, r);
  doc["absorption_time_bound"] = moran::absorption_time_bound(g, r);
  write_output(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_estimate(const GraphArgs& ga, const std::string& mode_text, double r, double epsilon,
                 std::uint64_t seed, unsigned workers, std::optional<std::uint64_t> replicates,
                 std::optional<std::uint64_t> max_steps, const std::string& out_path) {
  const moran::Graph g = ga.load();
  const moran::EstimateMode mode = mode_text == "fixation" ? moran::EstimateMode::Fixation
                                                           : moran::EstimateMode::Extinction;
  moran::EstimatorPlan plan = moran::plan(g, mode, r, epsilon, seed);
  if (replicates) {
    plan.replicates = *replicates;
    plan.certified = false;
  }
  if (max_steps) {
    plan.step_cap = *max_steps;
    plan.certified = false;
  }
  const moran::EstimateReport report = moran::estimate(g, plan, workers);

  const double f_lower = mode == moran::EstimateMode::Fixation
                             ? 1.0 / static_cast<double>(g.order())
                             : 1.0 / (static_cast<double>(g.order()) + r);
  const double hoeffding =
      std::min(1.0, moran::hoeffding_error_bound(plan.replicates, epsilon, f_lower));

  json doc;
  doc["manifest"] = make_manifest("estimate", ga.source(), r, epsilon, seed);
  doc["n"] = g.order();
  doc["plan"] = {{"mode", mode_text},
                 {"r", plan.r},
                 {"epsilon", plan.epsilon},
                 {"replicates", plan.replicates},
                 {"step_cap", plan.step_cap},
                 {"certified", plan.certified}};
  doc["report"] = {{"estimate", report.estimate},
                   {"successes", report.successes},
                   {"replicates", report.replicates},
                   {"truncated_runs", report.truncated_runs},
                   {"status", report.status == moran::EstimateStatus::Ok ? "ok" : "aborted"}};
  doc["hoeffding_failure_bound"] = hoeffding;
  write_output(out_path, doc.dump(2) + "\n");
  return report.status == moran::EstimateStatus::Ok ? kExitOk : kExitAborted;
}

int cmd_simulate(const GraphArgs& ga, double r, std::uint64_t replicates, std::uint64_t max_steps,
                 std::uint64_t seed, const std::string& out_path) {
  if (replicates < 1) {
    throw std::invalid_argument("simulate: --replicates must be at least 1");
  }
  const moran::Graph g = ga.load();

  const json manifest = make_manifest("simulate", ga.source(), r, std::nullopt, seed);
  std::string out = "# " + manifest.dump() + "\n";
  out += "replicate,start_vertex,outcome,steps_taken,fixation_fraction,mean_steps\n";

  std::uint64_t fixations = 0;
  long double steps_total = 0;
  for (std::uint64_t i = 0; i < replicates; ++i) {
    moran::RngStream rng(seed, i);
    const moran::VertexId start = rng.next_below(g.order());
    const moran::TrajectoryResult tr = moran::run_to_absorption(g, start, r, rng, max_steps);
    const char* outcome = tr.outcome == moran::Outcome::Fixation     ? "fixation"
                          : tr.outcome == moran::Outcome::Extinction ? "extinction"
                                                                     : "truncated";
    if (tr.outcome == moran::Outcome::Fixation) ++fixations;
    steps_total += static_cast<long double>(tr.steps_taken);
    out += std::to_string(i) + ',' + std::to_string(tr.start_vertex) + ',' + outcome + ',' +
           std::to_string(tr.steps_taken) + ",,\n";
  }
  const double fraction = static_cast<double>(fixations) / static_cast<double>(replicates);
  const double mean_steps = static_cast<double>(steps_total / static_cast<long double>(replicates));
  out += "summary,,,," + format_double(fraction) + ',' + format_double(mean_steps) + '\n';
  write_output(out_path, out);
  return kExitOk;
}

int cmd_drift(const GraphArgs& ga, double r, const std::string& subset_spec, std::uint64_t trials,
              std::uint64_t seed, const std::string& out_path) {
  const moran::Graph g = ga.load();
  const std::vector<moran::VertexId> subset = parse_subset(subset_spec);
  const double exact = moran::expected_drift(g, subset, r);

  json doc;
  doc["manifest"] = make_manifest("drift", ga.source(), r, std::nullopt,
                                  trials > 0 ? std::optional<std::uint64_t>(seed) : std::nullopt);
  doc["n"] = g.order();
  doc["r"] = r;
  doc["subset"] = subset;
  doc["exact_drift"] = exact;
  if (trials > 0) {
    moran::RngStream rng(seed, 0);
    const moran::DriftEstimate est = moran::empirical_drift(g, subset, r, trials, rng);
    doc["empirical"] = {{"mean", est.mean}, {"std_error", est.std_error}, {"trials", est.trials}};
  }
  write_output(out_path, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moran process toolkit: exact fixation probabilities, bounds, simulation, and "
               "certified estimation on connected undirected graphs"};
  app.require_subcommand(1);

  std::string out_path;
  double r = 1.0;
  std::uint64_t seed = 0;

  auto* gen = app.add_subcommand("gen", "Write a generated graph as canonical edge-list text");
  std::string gen_kind;
  std::uint32_t gen_n = 0;
  gen->add_option("kind", gen_kind, "clique, cycle, path, star, or double-star")->required();
  gen->add_option("n", gen_n, "vertex count")->required();
  gen->add_option("--out", out_path, "Output path (default stdout)");

  auto* exact = app.add_subcommand("exact", "Solve fixation probabilities exactly");
  GraphArgs exact_graph;
  exact_graph.attach(exact);
  std::uint32_t cap = moran::kDefaultExactCap;
  bool iterative = false;
  exact->add_option("--r", r, "Mutant fitness (> 0)")->required();
  exact->add_option("--cap", cap, "Largest allowed vertex count (state space is 2^n)");
  exact->add_flag("--iterative", iterative, "Use the fixed-point sweep solver");
  exact->add_option("--out", out_path, "Output path (default stdout)");

  auto* estimate = app.add_subcommand("estimate", "Estimate fixation or extinction probability");
  GraphArgs est_graph;
  est_graph.attach(estimate);
  std::string mode_text;
  double epsilon = 0.1;
  unsigned workers = 0;
  std::optional<std::uint64_t> est_replicates;
  std::optional<std::uint64_t> est_max_steps;
  estimate->add_option("--mode", mode_text, "fixation or extinction")
      ->required()
      ->check(CLI::IsMember({"fixation", "extinction"}));
  estimate->add_option("--r", r, "Mutant fitness (> 0)")->required();
  estimate->add_option("--epsilon", epsilon, "Relative error target in (0,1), default 0.1");
  estimate->add_option("--seed", seed, "Master seed (default 0)");
  estimate->add_option("--workers", workers, "Worker threads (0 = hardware)");
  estimate->add_option("--replicates", est_replicates,
                       "Override replicate count (drops the certification)");
  estimate->add_option("--max-steps", est_max_steps,
                       "Override per-replicate step cap (drops the certification)");
  estimate->add_option("--out", out_path, "Output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Run replicates to absorption, CSV per run");
  GraphArgs sim_graph;
  sim_graph.attach(simulate);
  std::uint64_t sim_replicates = 100;
  std::uint64_t sim_max_steps = moran::kUnlimitedSteps;
  simulate->add_option("--r", r, "Mutant fitness (> 0)")->required();
  simulate->add_option("--replicates", sim_replicates, "Replicate count (default 100)");
  simulate->add_option("--max-steps", sim_max_steps, "Per-replicate step cap (default unlimited)");
  simulate->add_option("--seed", seed, "Master seed (default 0)");
  simulate->add_option("--out", out_path, "Output path (default stdout)");

  auto* drift = app.add_subcommand("drift", "Expected one-step potential change for a mutant set");
  GraphArgs drift_graph;
  drift_graph.attach(drift);
  std::string subset_spec;
  std::uint64_t drift_trials = 0;
  drift->add_option("--r", r, "Mutant fitness (> 0)")->required();
  drift->add_option("--subset", subset_spec, "Mutant set, e.g. 0,3,5-7")->required();
  drift->add_option("--trials", drift_trials, "Single-step Monte Carlo trials (default none)");
  drift->add_option("--seed", seed, "Master seed (default 0)");
  drift->add_option("--out", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_kind, gen_n, out_path);
    if (exact->parsed()) return cmd_exact(exact_graph, r, cap, iterative, out_path);
    if (estimate->parsed()) {
      return cmd_estimate(est_graph, mode_text, r, epsilon, seed, workers, est_replicates,
                          est_max_steps, out_path);
    }
    if (simulate->parsed()) {
      return cmd_simulate(sim_graph, r, sim_replicates, sim_max_steps, seed, out_path);
    }
    if (drift->parsed()) {
      return cmd_drift(drift_graph, r, subset_spec, drift_trials, seed, out_path);
    }
  } catch (const moran::StateSpaceCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\nhint: use `estimate` for graphs above the cap\n";
    return kExitCapExceeded;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
