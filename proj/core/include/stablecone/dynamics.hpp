#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stablecone/graph.hpp"
#include "stablecone/rng.hpp"
#include "stablecone/terms.hpp"

namespace stablecone {

// Random-dyad Metropolis dynamics on a fixed vertex set.
//
// Chain c of an experiment draws from Rng(seed, c), so results depend only on
// the seed and not on how chains are scheduled across threads.

struct ChainConfig {
  std::uint64_t max_steps = 1'000'000;
  std::uint64_t seed = 0;
  bool record_first_change = true;
  bool record_persistence = false;
  bool record_trajectory = false;
  /// Worker threads for multi-chain experiments; 0 picks the hardware count.
  unsigned threads = 0;

  void validate() const;
};

struct TransitionProbs {
  double p_stay = 1.0;
  double p_plus = 0.0;
  double p_minus = 0.0;
};

struct StepResult {
  Graph graph;
  bool accepted = false;
  Dyad dyad;
};

/// min(1, exp(theta . change_score(g, d))).
double acceptance_probability(const Graph& g, const Dyad& d, const ModelSpec& m);

/// One proposal: a uniform dyad, accepted with the Metropolis ratio.
/// Needs theta; throws PreconditionError without it.
StepResult metropolis_step(const Graph& g, const ModelSpec& m, Rng& rng);

/// In-place form used by the chains; the graph is toggled on acceptance.
bool metropolis_step_in_place(Graph& g, const ModelSpec& m, Rng& rng, Dyad& proposed);

struct FirstChange {
  /// 1-based step of the first accepted toggle; empty on timeout.
  std::optional<std::uint64_t> steps;
  std::optional<Dyad> dyad;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  [[nodiscard]] bool timed_out() const noexcept { return !steps.has_value(); }
};

FirstChange run_until_first_change(const Graph& g, const ModelSpec& m, const ChainConfig& cfg,
                                   std::uint64_t stream = 0);

/// n independent first-change runs; run c uses stream c.
std::vector<FirstChange> first_change_runs(const Graph& g, const ModelSpec& m, std::size_t n,
                                           const ChainConfig& cfg);

struct AcceptedMove {
  std::uint64_t step = 0;
  Dyad dyad;
};

struct ChainTrace {
  Graph final_graph;
  std::uint64_t accepted = 0;
  /// Filled only when trajectories are recorded.
  std::vector<AcceptedMove> moves;
};

ChainTrace run_chain(const Graph& g, const ModelSpec& m, std::uint64_t steps, Rng& rng,
                     bool record_trajectory = false);

/// Fraction of n_chains chains of `steps` steps whose final edge set equals g's.
double persistence_experiment(const Graph& g, const ModelSpec& m, std::size_t n_chains,
                              std::uint64_t steps, std::uint64_t seed, unsigned threads = 0);

struct Census {
  /// First accepted toggles per dyad, indexed by Dyad::index().
  std::vector<std::uint64_t> counts;
  std::uint64_t timeouts = 0;
  std::uint64_t n_trajectories = 0;
  /// Sum of steps over completed runs.
  std::uint64_t completed_steps = 0;

  [[nodiscard]] std::uint64_t completed() const noexcept { return n_trajectories - timeouts; }
  /// Mean first-change step over completed runs; NaN if none completed.
  [[nodiscard]] double mean_steps() const;
};

Census census_from_runs(int n_vertices, const std::vector<FirstChange>& runs);

Census first_change_census(const Graph& g, const ModelSpec& m, std::size_t n_traj,
                           const ChainConfig& cfg);

/// Closed-form one-step probabilities of a star on v vertices under
/// [edges, nsp(0)] with coefficients (x, y): G+ adds a periphery edge, G-
/// removes a spoke. Throws DomainError for v < 3.
TransitionProbs star_transition_probs(int v, double x, double y);

}  // namespace stablecone
