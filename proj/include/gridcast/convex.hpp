#ifndef GRIDCAST_CONVEX_HPP_
#define GRIDCAST_CONVEX_HPP_

#include <Eigen/Dense>

#include "gridcast/errors.hpp"

namespace gridcast {

/// Convex set with a closed-form Euclidean projection.
struct ElementaryConvexSet {
    enum class Kind { box, halfspace, hyperplane };

    Kind kind = Kind::box;
    Eigen::VectorXd lo, hi;  // box
    Eigen::VectorXd a;       // halfspace a.x <= b, hyperplane a.x == b
    double b = 0.0;

    static ElementaryConvexSet make_box(Eigen::VectorXd lo, Eigen::VectorXd hi);
    static ElementaryConvexSet make_halfspace(Eigen::VectorXd a, double b);
    static ElementaryConvexSet make_hyperplane(Eigen::VectorXd a, double b);

    int dimension() const { return kind == Kind::box ? int(lo.size()) : int(a.size()); }
};

Eigen::VectorXd project_elementary(const Eigen::VectorXd& point, const ElementaryConvexSet& set);

/// Euclidean distance from `point` to the set (0 inside).
double violation(const Eigen::VectorXd& point, const ElementaryConvexSet& set);

}  // namespace gridcast

#endif
