#ifndef GRIDCAST_PROTECT_HPP_
#define GRIDCAST_PROTECT_HPP_

#include <set>
#include <vector>

#include "gridcast/convex.hpp"
#include "gridcast/grid.hpp"
#include "gridcast/topology_state.hpp"

namespace gridcast {

/// Feasibility set X_s of one topology: injection box, one power-balance
/// hyperplane per island, and two flow halfspaces per connected branch.
struct TopologyConstraintSet {
    TopologyState state;
    std::vector<ElementaryConvexSet> sets;
};

TopologyConstraintSet build_constraint_set(const GridCase& grid, const TopologyState& state);

struct FeasibilityReport {
    bool feasible = false;  // false means "unknown" (projection gap stalled)
    Eigen::VectorXd witness;
    double gap = 0.0;  // largest violation at the returned point
};

/// Plain cyclic alternating projections from `start`; finds a point of the
/// intersection when one exists and stalls at a positive gap otherwise.
FeasibilityReport check_feasibility(const std::vector<ElementaryConvexSet>& sets,
                                    const Eigen::VectorXd& start, double tol, int max_iter);

struct CycleDiagnostics {
    int cycle = 0;
    double max_violation = 0.0;
    double movement = 0.0;
};

struct DykstraSolveResult {
    Eigen::VectorXd solution;
    bool converged = false;
    int iterations = 0;       // cycles executed
    double max_violation = 0.0;
    std::vector<CycleDiagnostics> increments;
};

/// Cyclic Dykstra projection of `origin` onto the intersection of all listed
/// constraint sets, flattened and deduplicated. Converges to the Euclidean
/// best approximation for nonempty intersections; throws EMPTY_INTERSECTION
/// when the iteration stalls with the violation clearly above tol.
DykstraSolveResult dykstra_project(const Eigen::VectorXd& origin,
                                   const std::vector<TopologyConstraintSet>& sets, int max_cycles,
                                   double tol);

struct ProtectionSolution {
    Eigen::VectorXd delta;  // P_b* - P_b^0
    DykstraSolveResult result;
    double bound = 0.0;     // prevention probability, carried from the trajectory
};

/// Full protection solve for every topology in d_eps: pre-checks per-set
/// feasibility, projects, then re-runs the DC flow on each topology to
/// verify every branch stays within threshold (+tol).
ProtectionSolution solve_protection(const GridCase& grid, const std::set<TopologyState>& d_eps,
                                    int max_cycles, double tol, double bound);

}  // namespace gridcast

#endif
