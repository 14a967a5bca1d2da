#include <doctest.h>

#include <random>

#include "gridcast/convex.hpp"

using namespace gridcast;

TEST_CASE("box projection clamps coordinatewise") {
    const auto box = ElementaryConvexSet::make_box(Eigen::Vector3d(-1, 0, 2), Eigen::Vector3d(1, 2, 3));
    const Eigen::Vector3d p = project_elementary(Eigen::Vector3d(5, -1, 2.5), box);
    CHECK(p == Eigen::Vector3d(1, 0, 2.5));
    CHECK(violation(Eigen::Vector3d(1, 1, 2.5), box) == 0.0);
    CHECK(violation(Eigen::Vector3d(2, 1, 2.5), box) == doctest::Approx(1.0));
}

TEST_CASE("halfspace projection") {
    // x + y <= 1
    const auto hs = ElementaryConvexSet::make_halfspace(Eigen::Vector2d(1, 1), 1.0);
    SUBCASE("interior points are fixed") {
        const Eigen::Vector2d p(0.2, 0.3);
        CHECK(project_elementary(p, hs) == p);
    }
    SUBCASE("exterior points land on the boundary along the normal") {
        const Eigen::Vector2d p = project_elementary(Eigen::Vector2d(1, 1), hs);
        CHECK(p[0] == doctest::Approx(0.5));
        CHECK(p[1] == doctest::Approx(0.5));
        CHECK(violation(Eigen::Vector2d(1, 1), hs) == doctest::Approx(1.0 / std::sqrt(2.0)));
    }
    SUBCASE("non-unit normals are handled") {
        const auto scaled = ElementaryConvexSet::make_halfspace(Eigen::Vector2d(2, 2), 2.0);
        const Eigen::Vector2d p = project_elementary(Eigen::Vector2d(1, 1), scaled);
        CHECK(p[0] == doctest::Approx(0.5));
        CHECK(p[1] == doctest::Approx(0.5));
    }
}

TEST_CASE("hyperplane projection") {
    // x - y == 1
    const auto hp = ElementaryConvexSet::make_hyperplane(Eigen::Vector2d(1, -1), 1.0);
    const Eigen::Vector2d p = project_elementary(Eigen::Vector2d(1, 0), hp);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.0));

    // (1, 1) is off the plane on either side; projection moves along (1,-1)
    const Eigen::Vector2d q = project_elementary(Eigen::Vector2d(1, 1), hp);
    CHECK(q[0] == doctest::Approx(1.5));
    CHECK(q[1] == doctest::Approx(0.5));

    // x + y == 0 from (1, 0)
    const auto zero_sum = ElementaryConvexSet::make_hyperplane(Eigen::Vector2d(1, 1), 0.0);
    const Eigen::Vector2d r = project_elementary(Eigen::Vector2d(1, 0), zero_sum);
    CHECK(r[0] == doctest::Approx(0.5));
    CHECK(r[1] == doctest::Approx(-0.5));
}

TEST_CASE("invalid constructions are rejected") {
    CHECK_THROWS_AS(ElementaryConvexSet::make_box(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)),
                    GridError);
    CHECK_THROWS_AS(ElementaryConvexSet::make_halfspace(Eigen::Vector2d::Zero(), 1.0), GridError);
    CHECK_THROWS_AS(ElementaryConvexSet::make_hyperplane(Eigen::Vector3d::Zero(), 0.0), GridError);
}

namespace {

std::vector<ElementaryConvexSet> sample_sets(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    auto vec = [&]() {
        return Eigen::VectorXd::NullaryExpr(dim, [&](int) { return unif(rng); }).eval();
    };
    Eigen::VectorXd lo = vec(), hi = vec();
    for (int i = 0; i < dim; ++i)
        if (lo[i] > hi[i]) std::swap(lo[i], hi[i]);
    Eigen::VectorXd a = vec();
    if (a.norm() < 1e-6) a[0] = 1.0;
    return {ElementaryConvexSet::make_box(lo, hi),
            ElementaryConvexSet::make_halfspace(a, unif(rng)),
            ElementaryConvexSet::make_hyperplane(a, unif(rng))};
}

}  // namespace

TEST_CASE("projections are idempotent and firmly nonexpansive") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + trial % 4;
        auto vec = [&]() {
            return Eigen::VectorXd::NullaryExpr(dim, [&](int) { return unif(rng); }).eval();
        };
        for (const auto& set : sample_sets(dim, rng)) {
            const Eigen::VectorXd x = vec(), y = vec();
            const Eigen::VectorXd px = project_elementary(x, set);
            const Eigen::VectorXd py = project_elementary(y, set);
            CHECK((project_elementary(px, set) - px).norm() < 1e-12);
            CHECK(violation(px, set) < 1e-9);
            // firm nonexpansiveness: ||px - py||^2 <= (px - py).(x - y)
            CHECK(((px - py).squaredNorm()) <= (px - py).dot(x - y) + 1e-12);
        }
    }
}
