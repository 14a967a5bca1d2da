#include "gridcast/outage.hpp"

#include <algorithm>
#include <cmath>

#include "gridcast/dc_flow.hpp"

namespace gridcast {

double p_over(double flow, double threshold, const OutageParams& params) {
    if (!(threshold > 0.0))
        throw GridError(ErrorCode::nonpositive_threshold, "flow threshold must be positive");
    const double r = std::abs(flow) / threshold;
    if (r < params.overload_lower) return 0.0;
    if (r > params.overload_upper) return 1.0;
    const double slope = 1.0 / (params.overload_upper - params.overload_lower);
    const double p = slope * (r - params.overload_lower);
    return std::clamp(p, 0.0, 1.0);
}

double p_hidden(int branch, const TopologyState& state, const GridCase& grid,
                const OutageParams& params) {
    const Branch& br = grid.branches[branch - 1];
    for (int l = 1; l <= grid.branch_count(); ++l) {
        if (l == branch || state.is_on(l)) continue;
        const Branch& other = grid.branches[l - 1];
        if (other.from == br.from || other.from == br.to || other.to == br.from ||
            other.to == br.to)
            return params.p_hidden_adjacent;
    }
    return params.p_hidden_far;
}

BranchOutageProbabilities branch_lambdas(const GridCase& grid, const TopologyState& state,
                                         const OutageParams& params) {
    const int n = grid.branch_count();
    const FlowSolution flow = solve_flow(grid, state, grid.injections0);

    BranchOutageProbabilities out;
    out.lambda = Eigen::VectorXd::Zero(n);
    out.p_over = Eigen::VectorXd::Zero(n);
    out.p_hidden = Eigen::VectorXd::Zero(n);
    out.p_cont = Eigen::VectorXd::Zero(n);
    for (int l = 1; l <= n; ++l) {
        if (!state.is_on(l)) continue;  // severed branches cannot fail again
        const double po = p_over(flow.flows[l - 1], grid.flow_thresholds[l - 1], params);
        const double ph = p_hidden(l, state, grid, params);
        const double pc = params.p_cont;
        out.p_over[l - 1] = po;
        out.p_hidden[l - 1] = ph;
        out.p_cont[l - 1] = pc;
        out.lambda[l - 1] = 1.0 - (1.0 - po) * (1.0 - ph) * (1.0 - pc);
    }
    return out;
}

}  // namespace gridcast
