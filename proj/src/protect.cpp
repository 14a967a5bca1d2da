#include "gridcast/protect.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gridcast/dc_flow.hpp"

namespace gridcast {

TopologyConstraintSet build_constraint_set(const GridCase& grid, const TopologyState& state) {
    TopologyConstraintSet out;
    out.state = state;
    out.sets.push_back(ElementaryConvexSet::make_box(grid.injection_lower, grid.injection_upper));

    for (const auto& isle : islands(grid, state)) {
        Eigen::VectorXd indicator = Eigen::VectorXd::Zero(grid.bus_count);
        for (int bus : isle) indicator[bus - 1] = 1.0;
        out.sets.push_back(ElementaryConvexSet::make_hyperplane(std::move(indicator), 0.0));
    }

    const FlowMap map = flow_map(grid, state);
    for (int l = 1; l <= grid.branch_count(); ++l) {
        if (!state.is_on(l)) continue;
        const Eigen::VectorXd row = map.matrix.row(l - 1).transpose();
        const double sigma = grid.flow_thresholds[l - 1];
        out.sets.push_back(ElementaryConvexSet::make_halfspace(row, sigma));
        out.sets.push_back(ElementaryConvexSet::make_halfspace(-row, sigma));
    }
    return out;
}

namespace {

// Violation in constraint units (p.u. flow excess / imbalance / bound
// overshoot), as opposed to the Euclidean distance of project_elementary.
double constraint_excess(const Eigen::VectorXd& x, const ElementaryConvexSet& set) {
    switch (set.kind) {
        case ElementaryConvexSet::Kind::box: {
            double e = 0.0;
            for (int i = 0; i < x.size(); ++i)
                e = std::max({e, set.lo[i] - x[i], x[i] - set.hi[i]});
            return e;
        }
        case ElementaryConvexSet::Kind::halfspace:
            return std::max(0.0, set.a.dot(x) - set.b);
        case ElementaryConvexSet::Kind::hyperplane:
            return std::abs(set.a.dot(x) - set.b);
    }
    return 0.0;
}

double max_excess(const Eigen::VectorXd& x, const std::vector<ElementaryConvexSet>& sets) {
    double e = 0.0;
    for (const auto& s : sets) e = std::max(e, constraint_excess(x, s));
    return e;
}

// Identical sets across topologies collapse to one instance. Matching is
// exact on the unit-normalized coefficients; near-duplicates are kept.
std::vector<ElementaryConvexSet> flatten_dedup(const std::vector<TopologyConstraintSet>& sets) {
    std::vector<ElementaryConvexSet> flat;
    std::map<std::vector<double>, int> seen;
    for (const auto& topo : sets) {
        for (const auto& s : topo.sets) {
            std::vector<double> key;
            key.push_back(double(int(s.kind)));
            if (s.kind == ElementaryConvexSet::Kind::box) {
                for (int i = 0; i < s.lo.size(); ++i) {
                    key.push_back(s.lo[i]);
                    key.push_back(s.hi[i]);
                }
            } else {
                const double scale = s.a.norm();
                for (int i = 0; i < s.a.size(); ++i) key.push_back(s.a[i] / scale);
                key.push_back(s.b / scale);
            }
            if (seen.emplace(std::move(key), 1).second) flat.push_back(s);
        }
    }
    return flat;
}

}  // namespace

FeasibilityReport check_feasibility(const std::vector<ElementaryConvexSet>& sets,
                                    const Eigen::VectorXd& start, double tol, int max_iter) {
    if (!(tol > 0.0))
        throw GridError(ErrorCode::invalid_case, "feasibility tolerance must be positive");
    FeasibilityReport report;
    Eigen::VectorXd x = start;
    for (int it = 0; it < max_iter; ++it) {
        for (const auto& s : sets) x = project_elementary(x, s);
        report.gap = max_excess(x, sets);
        if (report.gap <= tol) {
            report.feasible = true;
            break;
        }
    }
    report.witness = std::move(x);
    return report;
}

DykstraSolveResult dykstra_project(const Eigen::VectorXd& origin,
                                   const std::vector<TopologyConstraintSet>& sets, int max_cycles,
                                   double tol) {
    if (sets.empty())
        throw GridError(ErrorCode::dimension_mismatch, "at least one constraint set required");
    if (max_cycles < 1)
        throw GridError(ErrorCode::dimension_mismatch, "iteration budget must be at least 1");

    const std::vector<ElementaryConvexSet> flat = flatten_dedup(sets);
    const std::size_t r = flat.size();

    DykstraSolveResult result;
    Eigen::VectorXd x = origin;
    std::vector<Eigen::VectorXd> corrections(r, Eigen::VectorXd::Zero(origin.size()));

    double movement = 0.0;
    for (int cycle = 1; cycle <= max_cycles; ++cycle) {
        const Eigen::VectorXd prev = x;
        // The iterate alone can sit still for whole cycles while a correction
        // vector is still drifting (box clamping to the same corner), so the
        // stopping rule requires the corrections to settle as well.
        double correction_drift = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
            const Eigen::VectorXd y = x + corrections[i];
            x = project_elementary(y, flat[i]);
            correction_drift = std::max(correction_drift, (y - x - corrections[i]).norm());
            corrections[i] = y - x;
        }
        movement = (x - prev).norm();
        result.max_violation = max_excess(x, flat);
        result.iterations = cycle;
        result.increments.push_back({cycle, result.max_violation, movement});
        if (movement <= tol && correction_drift <= tol && result.max_violation <= tol) break;
    }

    result.converged = result.max_violation <= tol;
    result.solution = std::move(x);
    if (!result.converged && movement <= 0.1 * tol && result.max_violation > 10.0 * tol)
        throw GridError(ErrorCode::empty_intersection,
                        "projection stalled with violation " + std::to_string(result.max_violation));
    return result;
}

ProtectionSolution solve_protection(const GridCase& grid, const std::set<TopologyState>& d_eps,
                                    int max_cycles, double tol, double bound) {
    if (d_eps.empty())
        throw GridError(ErrorCode::dimension_mismatch, "uncertainty set is empty");

    std::vector<TopologyConstraintSet> sets;
    sets.reserve(d_eps.size());
    const Eigen::VectorXd center = 0.5 * (grid.injection_lower + grid.injection_upper);
    std::vector<ElementaryConvexSet> all;
    for (const auto& state : d_eps) {
        sets.push_back(build_constraint_set(grid, state));
        const FeasibilityReport rep = check_feasibility(sets.back().sets, center, tol, 500);
        if (!rep.feasible)
            throw GridError(ErrorCode::empty_intersection,
                            "constraint set of state " + state.hex() + " appears infeasible (gap " +
                                std::to_string(rep.gap) + ")");
        all.insert(all.end(), sets.back().sets.begin(), sets.back().sets.end());
    }
    const FeasibilityReport joint = check_feasibility(all, center, tol, 2000);
    if (!joint.feasible)
        throw GridError(ErrorCode::empty_intersection,
                        "joint constraint set appears infeasible (gap " + std::to_string(joint.gap) + ")");

    ProtectionSolution out;
    out.bound = bound;
    out.result = dykstra_project(grid.injections0, sets, max_cycles, tol);
    out.delta = out.result.solution - grid.injections0;

    if (out.result.converged) {
        for (const auto& state : d_eps) {
            const FlowSolution flow = solve_flow(grid, state, out.result.solution);
            for (int l = 1; l <= grid.branch_count(); ++l) {
                if (std::abs(flow.flows[l - 1]) > grid.flow_thresholds[l - 1] + tol)
                    throw GridError(ErrorCode::postcheck_failed,
                                    "branch " + std::to_string(l) + " exceeds threshold on state " +
                                        state.hex());
            }
        }
    }
    return out;
}

}  // namespace gridcast
