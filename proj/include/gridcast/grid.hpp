#ifndef GRIDCAST_GRID_HPP_
#define GRIDCAST_GRID_HPP_

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "gridcast/errors.hpp"
#include "gridcast/topology_state.hpp"

namespace gridcast {

struct Branch {
    int from = 0;  // 1-based bus index
    int to = 0;
    double susceptance = 0.0;  // per-unit
};

enum class SlackPolicy {
    distributed_uniform,
    distributed_by_capacity,
};

/// Static network description. Immutable after construction; all per-unit.
struct GridCase {
    int bus_count = 0;  // m
    std::vector<Branch> branches;
    double base_mva = 100.0;
    Eigen::VectorXd injections0;       // m, generation positive, load negative
    Eigen::VectorXd injection_lower;   // m
    Eigen::VectorXd injection_upper;   // m
    Eigen::VectorXd flow_thresholds;   // n, sigma_j > 0
    SlackPolicy slack_policy = SlackPolicy::distributed_uniform;

    int branch_count() const { return static_cast<int>(branches.size()); }

    /// Throws INVALID_CASE naming the first failing invariant.
    void validate() const;
};

/// n x m branch-to-bus incidence: +1 at the from bus, -1 at the to bus.
Eigen::SparseMatrix<double> incidence(const GridCase& grid);

/// Connected components of the graph restricted to branches with bit = 1.
/// Each component is a sorted list of 1-based bus indices; components are
/// ordered by their smallest bus. Isolated buses form singleton islands.
std::vector<std::vector<int>> islands(const GridCase& grid, const TopologyState& state);

}  // namespace gridcast

#endif
