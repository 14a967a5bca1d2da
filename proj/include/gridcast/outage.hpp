#ifndef GRIDCAST_OUTAGE_HPP_
#define GRIDCAST_OUTAGE_HPP_

#include <Eigen/Dense>

#include "gridcast/grid.hpp"
#include "gridcast/topology_state.hpp"

namespace gridcast {

struct OutageParams {
    double p_cont = 1e-4;
    double p_hidden_adjacent = 1e-2;
    double p_hidden_far = 1e-4;
    double overload_lower = 0.8;   // r below this: p_over = 0
    double overload_upper = 1.05;  // r above this: p_over = 1
    double lambda_floor = 1e-3;    // successor-enumeration pruning threshold
    int max_candidates = 20;       // cap on jointly enumerated branches
    bool exact_survivor_factors = false;  // include (1 - lambda) of sub-floor branches

    void validate() const {
        auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!prob(p_cont) || !prob(p_hidden_adjacent) || !prob(p_hidden_far) || !prob(lambda_floor))
            throw GridError(ErrorCode::invalid_case, "outage probabilities must lie in [0,1]");
        if (!(overload_lower < overload_upper))
            throw GridError(ErrorCode::invalid_case, "overload_lower must be below overload_upper");
        if (max_candidates < 1)
            throw GridError(ErrorCode::invalid_case, "max_candidates must be at least 1");
    }
};

struct BranchOutageProbabilities {
    Eigen::VectorXd lambda;    // n, zero on already-outaged branches
    Eigen::VectorXd p_over;    // components, same layout
    Eigen::VectorXd p_hidden;
    Eigen::VectorXd p_cont;
};

/// Overload outage probability from the flow/threshold ratio r:
/// 0 below overload_lower, 1 above overload_upper, linear ramp between
/// (4r - 3.2 with the default 0.8/1.05 corners).
double p_over(double flow, double threshold, const OutageParams& params);

/// Hidden-failure probability: elevated when the branch shares a bus with
/// any branch already outaged in `state`.
double p_hidden(int branch, const TopologyState& state, const GridCase& grid,
                const OutageParams& params);

/// Composes lambda_l = 1 - (1-p_over)(1-p_hidden)(1-p_cont) per connected
/// branch, with flows solved on `state` under the given injections.
BranchOutageProbabilities branch_lambdas(const GridCase& grid, const TopologyState& state,
                                         const OutageParams& params);

}  // namespace gridcast

#endif
