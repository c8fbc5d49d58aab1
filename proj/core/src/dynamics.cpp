#include "stablecone/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "stablecone/error.hpp"

namespace stablecone {
namespace {

void require_theta(const Graph& g, const ModelSpec& m) {
  if (!m.has_theta()) throw PreconditionError("Metropolis dynamics need theta in the model");
  m.validate_against(g);
  if (n_dyads(g.n_vertices()) == 0) throw PreconditionError("graph has no dyads to propose");
}

// Runs f(0..n-1) on up to `threads` workers. Each index writes its own slot,
// so the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t c = 0; c < n; ++c) f(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t c = next++; c < n; c = next++) f(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void ChainConfig::validate() const {
  if (max_steps < 1) throw ValidationError("max_steps must be at least 1");
}

double acceptance_probability(const Graph& g, const Dyad& d, const ModelSpec& m) {
  require_theta(g, m);
  g.check_dyad(d);
  const double log_ratio = m.theta.dot(change_score_unchecked(g, d, m));
  return log_ratio >= 0 ? 1.0 : std::exp(log_ratio);
}

bool metropolis_step_in_place(Graph& g, const ModelSpec& m, Rng& rng, Dyad& proposed) {
  proposed = dyad_from_index(rng.uniform_index(n_dyads(g.n_vertices())));
  const double log_ratio = m.theta.dot(change_score_unchecked(g, proposed, m));
  const bool accept = log_ratio >= 0 || rng.uniform01() < std::exp(log_ratio);
  if (accept) g.toggle_in_place(proposed);
  return accept;
}

StepResult metropolis_step(const Graph& g, const ModelSpec& m, Rng& rng) {
  require_theta(g, m);
  StepResult out{g, false, Dyad{}};
  out.accepted = metropolis_step_in_place(out.graph, m, rng, out.dyad);
  return out;
}

FirstChange run_until_first_change(const Graph& g, const ModelSpec& m, const ChainConfig& cfg,
                                   std::uint64_t stream) {
  cfg.validate();
  require_theta(g, m);
  FirstChange out;
  out.seed = cfg.seed;
  out.stream = stream;
  Rng rng(cfg.seed, stream);
  // The state never changes before the first acceptance, so one copy serves.
  Graph state = g;
  Dyad proposed;
  for (std::uint64_t step = 1; step <= cfg.max_steps; ++step) {
    if (metropolis_step_in_place(state, m, rng, proposed)) {
      out.steps = step;
      out.dyad = proposed;
      return out;
    }
  }
  return out;
}

std::vector<FirstChange> first_change_runs(const Graph& g, const ModelSpec& m, std::size_t n,
                                           const ChainConfig& cfg) {
  cfg.validate();
  require_theta(g, m);
  std::vector<FirstChange> runs(n);
  parallel_for(n, cfg.threads, [&](std::size_t c) { runs[c] = run_until_first_change(g, m, cfg, c); });
  return runs;
}

ChainTrace run_chain(const Graph& g, const ModelSpec& m, std::uint64_t steps, Rng& rng,
                     bool record_trajectory) {
  require_theta(g, m);
  ChainTrace out{g, 0, {}};
  Dyad proposed;
  for (std::uint64_t step = 1; step <= steps; ++step) {
    if (metropolis_step_in_place(out.final_graph, m, rng, proposed)) {
      ++out.accepted;
      if (record_trajectory) out.moves.push_back({step, proposed});
    }
  }
  return out;
}

double persistence_experiment(const Graph& g, const ModelSpec& m, std::size_t n_chains,
                              std::uint64_t steps, std::uint64_t seed, unsigned threads) {
  if (n_chains == 0) throw ValidationError("persistence needs at least one chain");
  require_theta(g, m);
  if (steps == 0) return 1.0;
  std::vector<char> persisted(n_chains, 0);
  parallel_for(n_chains, threads, [&](std::size_t c) {
    Rng rng(seed, c);
    persisted[c] = run_chain(g, m, steps, rng).final_graph == g ? 1 : 0;
  });
  const auto kept = std::count(persisted.begin(), persisted.end(), char{1});
  return static_cast<double>(kept) / static_cast<double>(n_chains);
}

double Census::mean_steps() const {
  const auto done = completed();
  if (done == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(completed_steps) / static_cast<double>(done);
}

Census census_from_runs(int n_vertices, const std::vector<FirstChange>& runs) {
  Census out;
  out.counts.assign(n_dyads(n_vertices), 0);
  out.n_trajectories = runs.size();
  for (const auto& run : runs) {
    if (run.timed_out()) {
      ++out.timeouts;
      continue;
    }
    ++out.counts[run.dyad->index()];
    out.completed_steps += *run.steps;
  }
  return out;
}

Census first_change_census(const Graph& g, const ModelSpec& m, std::size_t n_traj,
                           const ChainConfig& cfg) {
  return census_from_runs(g.n_vertices(), first_change_runs(g, m, n_traj, cfg));
}

TransitionProbs star_transition_probs(int v, double x, double y) {
  if (v < 3) throw DomainError("star transition probabilities need v >= 3, got " + std::to_string(v));
  const double vd = v;
  TransitionProbs out;
  const double remove = -x + (vd - 1) * y;
  out.p_minus = remove <= 0 ? (2 / vd) * std::exp(remove) : 2 / vd;
  out.p_plus = x <= 0 ? ((vd - 2) / vd) * std::exp(x) : (vd - 2) / vd;
  out.p_stay = 1 - out.p_plus - out.p_minus;
  if (out.p_stay < 0) out.p_stay = 0;
  return out;
}

}  // namespace stablecone
