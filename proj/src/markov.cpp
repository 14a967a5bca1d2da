#include "gridcast/markov.hpp"

#include <algorithm>
#include <random>

namespace gridcast {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

const BranchOutageProbabilities& cached_lambdas(const GridCase& grid, const TopologyState& state,
                                                const OutageParams& params, LambdaCache* cache,
                                                LambdaCache& local) {
    LambdaCache& store = cache ? *cache : local;
    auto it = store.find(state);
    if (it == store.end()) it = store.emplace(state, branch_lambdas(grid, state, params)).first;
    return it->second;
}

}  // namespace

double transition_probability(const TopologyState& i, const TopologyState& j,
                              const BranchOutageProbabilities& lambdas) {
    if (i.branch_count() != j.branch_count())
        throw GridError(ErrorCode::dimension_mismatch, "states have different bit-lengths");
    if (lambdas.lambda.size() != i.branch_count())
        throw GridError(ErrorCode::dimension_mismatch, "lambda vector length does not match state");
    if (!i.can_transition_to(j)) return 0.0;  // reconnection forbidden
    double p = 1.0;
    for (int l = 1; l <= i.branch_count(); ++l) {
        if (!i.is_on(l)) continue;
        const double lam = lambdas.lambda[l - 1];
        p *= j.is_on(l) ? (1.0 - lam) : lam;
    }
    return p;
}

TransitionFanout expand_successors(const TopologyState& state,
                                   const BranchOutageProbabilities& lambdas,
                                   const OutageParams& params) {
    if (lambdas.lambda.size() != state.branch_count())
        throw GridError(ErrorCode::dimension_mismatch, "lambda vector length does not match state");

    std::vector<int> candidates;
    double survivor_base = 1.0;
    for (int l = 1; l <= state.branch_count(); ++l) {
        if (!state.is_on(l)) continue;
        if (lambdas.lambda[l - 1] >= params.lambda_floor)
            candidates.push_back(l);
        else if (params.exact_survivor_factors)
            survivor_base *= 1.0 - lambdas.lambda[l - 1];
    }

    TransitionFanout fanout;
    fanout.source = state;
    if (static_cast<int>(candidates.size()) > params.max_candidates) {
        std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            return lambdas.lambda[a - 1] > lambdas.lambda[b - 1];
        });
        candidates.resize(params.max_candidates);
        std::sort(candidates.begin(), candidates.end());
        fanout.truncated_fanout = true;
        if (params.exact_survivor_factors) {
            // Dropped candidates revert to survivor treatment.
            survivor_base = 1.0;
            for (int l = 1; l <= state.branch_count(); ++l) {
                if (!state.is_on(l)) continue;
                if (!std::binary_search(candidates.begin(), candidates.end(), l))
                    survivor_base *= 1.0 - lambdas.lambda[l - 1];
            }
        }
    }

    std::vector<int> outaged;
    auto recurse = [&](auto&& self, std::size_t idx, double prob) -> void {
        if (prob == 0.0) return;
        if (idx == candidates.size()) {
            fanout.successors.emplace_back(state.with_outaged(outaged), prob);
            return;
        }
        const int l = candidates[idx];
        const double lam = lambdas.lambda[l - 1];
        self(self, idx + 1, prob * (1.0 - lam));
        outaged.push_back(l);
        self(self, idx + 1, prob * lam);
        outaged.pop_back();
    };
    recurse(recurse, 0, survivor_base);
    return fanout;
}

SparseDistribution apply_truncation(const SparseDistribution& x, double epsilon) {
    SparseDistribution out;
    out.step = x.step;
    for (const auto& [state, p] : x.entries)
        if (p > epsilon) out.entries.emplace(state, p);
    return out;
}

std::vector<SparseDistribution> propagate(const GridCase& grid, const SparseDistribution& x0,
                                          const OutageParams& params, double epsilon, int horizon,
                                          LambdaCache* lambda_cache) {
    LambdaCache local;
    std::vector<SparseDistribution> trajectory;
    trajectory.reserve(horizon + 1);
    trajectory.push_back(x0);
    trajectory.back().step = 0;

    for (int k = 1; k <= horizon; ++k) {
        SparseDistribution next;
        next.step = k;
        for (const auto& [state, p] : trajectory.back().entries) {
            const auto& lambdas = cached_lambdas(grid, state, params, lambda_cache, local);
            const TransitionFanout fanout = expand_successors(state, lambdas, params);
            for (const auto& [succ, q] : fanout.successors) next.entries[succ] += p * q;
        }
        trajectory.push_back(apply_truncation(next, epsilon));
    }
    return trajectory;
}

double prevention_bound(const std::vector<SparseDistribution>& trajectory, int k) {
    if (k < 0 || k >= static_cast<int>(trajectory.size()))
        throw GridError(ErrorCode::step_out_of_range,
                        "step " + std::to_string(k) + " outside trajectory");
    return trajectory[k].mass();
}

std::set<TopologyState> uncertainty_set(const std::vector<SparseDistribution>& trajectory,
                                        double /*epsilon*/, int horizon) {
    if (horizon >= static_cast<int>(trajectory.size()))
        throw GridError(ErrorCode::step_out_of_range, "horizon exceeds trajectory length");
    std::set<TopologyState> d_eps;
    for (int k = 1; k <= horizon; ++k)
        for (const auto& [state, p] : trajectory[k].entries) d_eps.insert(state);
    return d_eps;
}

namespace {

struct BeamEntry {
    CascadePath path;

    // Probability descending, then outage-set sequence ascending.
    bool operator<(const BeamEntry& o) const {
        if (path.probability != o.path.probability) return path.probability > o.path.probability;
        return path.steps < o.path.steps;
    }
};

}  // namespace

std::vector<CascadePath> beam_paths(const GridCase& grid, const SparseDistribution& x0,
                                    const OutageParams& params, int beam_width, int horizon,
                                    LambdaCache* lambda_cache) {
    if (beam_width < 1)
        throw GridError(ErrorCode::dimension_mismatch, "beam_width must be at least 1");
    LambdaCache local;

    std::vector<BeamEntry> beam;
    for (const auto& [state, p] : x0.entries) {
        BeamEntry e;
        e.path.probability = p;
        e.path.terminal_state = state;
        const auto initial = state.outaged_branches();
        if (!initial.empty()) e.path.steps.push_back(initial);
        beam.push_back(std::move(e));
    }
    std::sort(beam.begin(), beam.end());
    if (static_cast<int>(beam.size()) > beam_width) beam.resize(beam_width);

    for (int k = 1; k <= horizon; ++k) {
        std::vector<BeamEntry> expanded;
        for (const auto& entry : beam) {
            const TopologyState& state = entry.path.terminal_state;
            const auto& lambdas = cached_lambdas(grid, state, params, lambda_cache, local);
            const TransitionFanout fanout = expand_successors(state, lambdas, params);
            for (const auto& [succ, q] : fanout.successors) {
                BeamEntry e = entry;
                e.path.probability *= q;
                e.path.terminal_state = succ;
                std::vector<int> severed;
                for (int l = 1; l <= state.branch_count(); ++l)
                    if (state.is_on(l) && !succ.is_on(l)) severed.push_back(l);
                e.path.steps.push_back(std::move(severed));
                expanded.push_back(std::move(e));
            }
        }
        std::sort(expanded.begin(), expanded.end());
        if (static_cast<int>(expanded.size()) > beam_width) expanded.resize(beam_width);
        beam = std::move(expanded);
    }

    std::vector<CascadePath> out;
    out.reserve(beam.size());
    for (auto& e : beam) out.push_back(std::move(e.path));
    return out;
}

std::vector<std::map<TopologyState, double>> monte_carlo_cascade(
    const GridCase& grid, const SparseDistribution& x0, const OutageParams& params, int horizon,
    std::int64_t samples, std::uint64_t seed, LambdaCache* lambda_cache) {
    if (samples < 1)
        throw GridError(ErrorCode::dimension_mismatch, "samples must be at least 1");
    LambdaCache local;

    const double mass = x0.mass();
    std::vector<std::map<TopologyState, std::int64_t>> counts(horizon + 1);
    for (std::int64_t idx = 0; idx < samples; ++idx) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(idx))));
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        // Initial state drawn from x0 (normalized by its mass).
        double u = unif(rng) * mass;
        TopologyState state;
        for (const auto& [s, p] : x0.entries) {
            state = s;
            u -= p;
            if (u <= 0.0) break;
        }

        counts[0][state] += 1;
        for (int k = 1; k <= horizon; ++k) {
            const auto& lambdas = cached_lambdas(grid, state, params, lambda_cache, local);
            std::vector<int> severed;
            for (int l = 1; l <= grid.branch_count(); ++l)
                if (state.is_on(l) && unif(rng) < lambdas.lambda[l - 1]) severed.push_back(l);
            state = state.with_outaged(severed);
            counts[k][state] += 1;
        }
    }

    std::vector<std::map<TopologyState, double>> freq(horizon + 1);
    for (int k = 0; k <= horizon; ++k)
        for (const auto& [s, c] : counts[k]) freq[k][s] = double(c) / double(samples);
    return freq;
}

}  // namespace gridcast
