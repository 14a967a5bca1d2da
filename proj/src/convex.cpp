#include "gridcast/convex.hpp"

#include <algorithm>

namespace gridcast {

ElementaryConvexSet ElementaryConvexSet::make_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if (lo.size() != hi.size())
        throw GridError(ErrorCode::dimension_mismatch, "box bounds differ in length");
    for (int i = 0; i < lo.size(); ++i)
        if (!(lo[i] <= hi[i]))
            throw GridError(ErrorCode::invalid_case, "box requires lo <= hi per coordinate");
    ElementaryConvexSet s;
    s.kind = Kind::box;
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    return s;
}

ElementaryConvexSet ElementaryConvexSet::make_halfspace(Eigen::VectorXd a, double b) {
    if (a.norm() == 0.0)
        throw GridError(ErrorCode::invalid_case, "halfspace normal must be nonzero");
    ElementaryConvexSet s;
    s.kind = Kind::halfspace;
    s.a = std::move(a);
    s.b = b;
    return s;
}

ElementaryConvexSet ElementaryConvexSet::make_hyperplane(Eigen::VectorXd a, double b) {
    if (a.norm() == 0.0)
        throw GridError(ErrorCode::invalid_case, "hyperplane normal must be nonzero");
    ElementaryConvexSet s;
    s.kind = Kind::hyperplane;
    s.a = std::move(a);
    s.b = b;
    return s;
}

Eigen::VectorXd project_elementary(const Eigen::VectorXd& point, const ElementaryConvexSet& set) {
    if (point.size() != set.dimension())
        throw GridError(ErrorCode::dimension_mismatch, "point dimension does not match set");
    switch (set.kind) {
        case ElementaryConvexSet::Kind::box:
            return point.cwiseMax(set.lo).cwiseMin(set.hi);
        case ElementaryConvexSet::Kind::halfspace: {
            const double excess = set.a.dot(point) - set.b;
            if (excess <= 0.0) return point;
            return point - (excess / set.a.squaredNorm()) * set.a;
        }
        case ElementaryConvexSet::Kind::hyperplane: {
            const double excess = set.a.dot(point) - set.b;
            return point - (excess / set.a.squaredNorm()) * set.a;
        }
    }
    throw GridError(ErrorCode::invalid_case, "unknown set kind");
}

double violation(const Eigen::VectorXd& point, const ElementaryConvexSet& set) {
    return (point - project_elementary(point, set)).norm();
}

}  // namespace gridcast
