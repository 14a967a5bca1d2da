#ifndef GRIDCAST_TESTS_SUPPORT_HPP_
#define GRIDCAST_TESTS_SUPPORT_HPP_

#include <random>
#include <string>
#include <vector>

#include "gridcast/convex.hpp"
#include "gridcast/grid.hpp"
#include "gridcast/io.hpp"

namespace gridcast::testing {

std::string data_path(const std::string& name);

// Programmatic fixtures, independent of the file loaders.
GridCase make_two_bus(double flow_limit = 2.0);
GridCase make_triangle();

// 4-bus / 5-branch ring-with-chord used by the stochastic-model checks:
// nontrivial flow redistribution after outages, all ratios below the
// overload ramp in the base case.
GridCase make_five_branch_toy();

GridCase load_ieee118();

// Independent BFS islanding oracle.
std::vector<std::vector<int>> bfs_islands(const GridCase& grid, const TopologyState& state);

// Exhaustive active-set projection oracle for low-dimensional polyhedra.
Eigen::VectorXd oracle_project(const Eigen::VectorXd& origin,
                               const std::vector<ElementaryConvexSet>& sets);

// Lawson-Hanson nonnegative least squares; returns the residual norm.
double nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd* x = nullptr);

// KKT certificate residual for min ||x - origin|| over the given sets at
// `solution`: how far origin - solution is from the cone spanned by the
// active constraint normals.
double kkt_residual(const Eigen::VectorXd& origin, const Eigen::VectorXd& solution,
                    const std::vector<ElementaryConvexSet>& sets, double active_tol = 1e-6);

struct RandomInstance {
    std::vector<ElementaryConvexSet> sets;
    Eigen::VectorXd origin;
    Eigen::VectorXd interior_point;  // certifies nonemptiness
};

RandomInstance make_random_polyhedron(std::mt19937_64& rng, int dim, int extra_sets);

}  // namespace gridcast::testing

#endif
