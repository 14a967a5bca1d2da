#ifndef GRIDCAST_MARKOV_HPP_
#define GRIDCAST_MARKOV_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "gridcast/grid.hpp"
#include "gridcast/outage.hpp"
#include "gridcast/topology_state.hpp"

namespace gridcast {

/// Truncated probability distribution over topology states at one cascading
/// step. std::map keeps iteration (and serialization) deterministic.
struct SparseDistribution {
    std::map<TopologyState, double> entries;
    int step = 0;

    double mass() const {
        double s = 0.0;
        for (const auto& [state, p] : entries) s += p;
        return s;
    }
};

struct TransitionFanout {
    TopologyState source;
    std::vector<std::pair<TopologyState, double>> successors;
    bool truncated_fanout = false;  // candidate set was capped at max_candidates
};

struct CascadePath {
    std::vector<std::vector<int>> steps;  // outaged branch IDs per step, may be empty
    double probability = 0.0;
    TopologyState terminal_state;
};

/// Exact one-step transition probability: zero when j reconnects a branch of
/// i, otherwise the product of lambda over newly severed branches times
/// (1 - lambda) over surviving ones.
double transition_probability(const TopologyState& i, const TopologyState& j,
                              const BranchOutageProbabilities& lambdas);

/// Enumerates joint outages over the candidate set {connected branches with
/// lambda >= lambda_floor}, capped at params.max_candidates (largest lambdas
/// kept). Survivor factors of sub-floor branches are dropped unless
/// params.exact_survivor_factors is set.
TransitionFanout expand_successors(const TopologyState& state,
                                   const BranchOutageProbabilities& lambdas,
                                   const OutageParams& params);

/// Keeps entries with probability strictly greater than epsilon.
SparseDistribution apply_truncation(const SparseDistribution& x, double epsilon);

/// Truncated distribution iteration; returns the trajectory x^0 .. x^h.
/// Branch lambdas are cached per state across steps in `lambda_cache` when
/// one is supplied.
using LambdaCache = std::map<TopologyState, BranchOutageProbabilities>;

std::vector<SparseDistribution> propagate(const GridCase& grid, const SparseDistribution& x0,
                                          const OutageParams& params, double epsilon, int horizon,
                                          LambdaCache* lambda_cache = nullptr);

/// l1 mass of the truncated distribution at step k: the guaranteed lower
/// bound on Prob(s^k lies in the retained support).
double prevention_bound(const std::vector<SparseDistribution>& trajectory, int k);

/// Union of the supports of steps 1..horizon.
std::set<TopologyState> uncertainty_set(const std::vector<SparseDistribution>& trajectory,
                                        double epsilon, int horizon);

/// Beam search over cascading paths; ties broken lexicographically on the
/// outage-set sequence so runs are reproducible.
std::vector<CascadePath> beam_paths(const GridCase& grid, const SparseDistribution& x0,
                                    const OutageParams& params, int beam_width, int horizon,
                                    LambdaCache* lambda_cache = nullptr);

/// Monte Carlo oracle: independent per-branch Bernoulli(lambda) draws per
/// step. Returns empirical frequencies for steps 0..horizon; deterministic
/// for a fixed seed.
std::vector<std::map<TopologyState, double>> monte_carlo_cascade(
    const GridCase& grid, const SparseDistribution& x0, const OutageParams& params, int horizon,
    std::int64_t samples, std::uint64_t seed, LambdaCache* lambda_cache = nullptr);

}  // namespace gridcast

#endif
