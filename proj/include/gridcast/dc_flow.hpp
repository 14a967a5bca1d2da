#ifndef GRIDCAST_DC_FLOW_HPP_
#define GRIDCAST_DC_FLOW_HPP_

#include <Eigen/Dense>

#include "gridcast/grid.hpp"
#include "gridcast/topology_state.hpp"

namespace gridcast {

struct FlowSolution {
    Eigen::VectorXd flows;                  // n, zero on outaged branches
    Eigen::VectorXd angles;                 // m, radians, reference bus of each island at 0
    Eigen::VectorXd imbalance_adjustment;   // m, slack redistribution applied
};

/// Affine injection-to-flow map for one topology (PTDF). Rows of outaged
/// branches are zero; every row annihilates per-island constants, so the map
/// implicitly discards island imbalance like the pseudo-inverse does.
struct FlowMap {
    Eigen::MatrixXd matrix;  // n x m
    TopologyState state;
};

/// DC power flow on the topology `state`. Island imbalance is redistributed
/// per grid.slack_policy before solving; the applied correction is returned.
FlowSolution solve_flow(const GridCase& grid, const TopologyState& state,
                        const Eigen::VectorXd& injections);

FlowMap flow_map(const GridCase& grid, const TopologyState& state);

}  // namespace gridcast

#endif
