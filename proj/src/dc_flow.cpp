#include "gridcast/dc_flow.hpp"

#include <Eigen/Dense>

namespace gridcast {

namespace {

// Weighted Laplacian B = A^T diag(Y_hat) A restricted to live branches.
Eigen::MatrixXd weighted_laplacian(const GridCase& grid, const TopologyState& state) {
    const int m = grid.bus_count;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    for (int l = 1; l <= grid.branch_count(); ++l) {
        if (!state.is_on(l)) continue;
        const Branch& br = grid.branches[l - 1];
        const int i = br.from - 1, j = br.to - 1;
        const double b = br.susceptance;
        B(i, i) += b;
        B(j, j) += b;
        B(i, j) -= b;
        B(j, i) -= b;
    }
    return B;
}

Eigen::VectorXd rebalance(const GridCase& grid, const std::vector<std::vector<int>>& isles,
                          const Eigen::VectorXd& injections) {
    Eigen::VectorXd adjust = Eigen::VectorXd::Zero(grid.bus_count);
    for (const auto& isle : isles) {
        double surplus = 0.0;
        for (int bus : isle) surplus += injections[bus - 1];
        if (surplus == 0.0) continue;
        if (grid.slack_policy == SlackPolicy::distributed_by_capacity) {
            double total_cap = 0.0;
            for (int bus : isle)
                total_cap += grid.injection_upper[bus - 1] - grid.injection_lower[bus - 1];
            if (total_cap > 0.0) {
                for (int bus : isle) {
                    double w = (grid.injection_upper[bus - 1] - grid.injection_lower[bus - 1]) / total_cap;
                    adjust[bus - 1] -= surplus * w;
                }
                continue;
            }
        }
        for (int bus : isle) adjust[bus - 1] -= surplus / double(isle.size());
    }
    return adjust;
}

}  // namespace

FlowSolution solve_flow(const GridCase& grid, const TopologyState& state,
                        const Eigen::VectorXd& injections) {
    const int m = grid.bus_count;
    const int n = grid.branch_count();
    if (state.branch_count() != n)
        throw GridError(ErrorCode::dimension_mismatch, "state bit-length does not match branch_count");
    if (injections.size() != m)
        throw GridError(ErrorCode::dimension_mismatch, "injection vector length does not match bus_count");

    const auto isles = islands(grid, state);
    FlowSolution sol;
    sol.imbalance_adjustment = rebalance(grid, isles, injections);
    const Eigen::VectorXd p = injections + sol.imbalance_adjustment;
    sol.angles = Eigen::VectorXd::Zero(m);

    const Eigen::MatrixXd B = weighted_laplacian(grid, state);
    for (const auto& isle : isles) {
        const int k = static_cast<int>(isle.size());
        if (k == 1) continue;  // single bus: angle 0, no flow
        Eigen::MatrixXd Bi(k, k);
        Eigen::VectorXd pi(k);
        for (int a = 0; a < k; ++a) {
            pi[a] = p[isle[a] - 1];
            for (int b = 0; b < k; ++b) Bi(a, b) = B(isle[a] - 1, isle[b] - 1);
        }
        // Balanced pi: adding (1/k) 11^T makes the system nonsingular and
        // selects the zero-mean angle representative.
        Bi.array() += 1.0 / double(k);
        Eigen::VectorXd theta = Bi.ldlt().solve(pi);
        Bi.array() -= 1.0 / double(k);
        const double resid = (Bi * theta - pi).lpNorm<Eigen::Infinity>();
        if (!theta.allFinite() || resid > 1e-9 * std::max(1.0, pi.lpNorm<Eigen::Infinity>()))
            throw GridError(ErrorCode::singular_system,
                            "island solve residual " + std::to_string(resid));
        // Reference bus (smallest index in the island) pinned to angle 0.
        const double ref = theta[0];
        for (int a = 0; a < k; ++a) sol.angles[isle[a] - 1] = theta[a] - ref;
    }

    sol.flows = Eigen::VectorXd::Zero(n);
    for (int l = 1; l <= n; ++l) {
        if (!state.is_on(l)) continue;
        const Branch& br = grid.branches[l - 1];
        sol.flows[l - 1] = br.susceptance * (sol.angles[br.from - 1] - sol.angles[br.to - 1]);
    }
    return sol;
}

FlowMap flow_map(const GridCase& grid, const TopologyState& state) {
    const int m = grid.bus_count;
    const int n = grid.branch_count();
    if (state.branch_count() != n)
        throw GridError(ErrorCode::dimension_mismatch, "state bit-length does not match branch_count");

    const auto isles = islands(grid, state);
    const Eigen::MatrixXd B = weighted_laplacian(grid, state);

    // Moore-Penrose pseudo-inverse assembled per island:
    //   B+ = (Bi + 11^T/k)^-1 (I - 11^T/k)
    Eigen::MatrixXd Bplus = Eigen::MatrixXd::Zero(m, m);
    for (const auto& isle : isles) {
        const int k = static_cast<int>(isle.size());
        if (k == 1) continue;
        Eigen::MatrixXd Bi(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) Bi(a, b) = B(isle[a] - 1, isle[b] - 1);
        Bi.array() += 1.0 / double(k);
        Eigen::MatrixXd Minv = Bi.ldlt().solve(Eigen::MatrixXd::Identity(k, k));
        Eigen::MatrixXd Pi = Minv - Minv.rowwise().mean().replicate(1, k);
        if (!Pi.allFinite())
            throw GridError(ErrorCode::singular_system, "island pseudo-inverse failed");
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) Bplus(isle[a] - 1, isle[b] - 1) = Pi(a, b);
    }

    FlowMap map;
    map.state = state;
    map.matrix = Eigen::MatrixXd::Zero(n, m);
    for (int l = 1; l <= n; ++l) {
        if (!state.is_on(l)) continue;
        const Branch& br = grid.branches[l - 1];
        map.matrix.row(l - 1) =
            br.susceptance * (Bplus.row(br.from - 1) - Bplus.row(br.to - 1));
    }
    return map;
}

}  // namespace gridcast
