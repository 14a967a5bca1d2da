#include "support.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

#include "gridcast/dc_flow.hpp"

namespace gridcast::testing {

std::string data_path(const std::string& name) {
    return std::string(GRIDCAST_DATA_DIR) + "/" + name;
}

GridCase make_two_bus(double flow_limit) {
    GridCase grid;
    grid.bus_count = 2;
    grid.branches = {{1, 2, 1.0}};
    grid.injections0 = Eigen::Vector2d(1.0, -1.0);
    grid.injection_lower = Eigen::Vector2d(0.0, -2.0);
    grid.injection_upper = Eigen::Vector2d(2.0, 0.0);
    grid.flow_thresholds = Eigen::VectorXd::Constant(1, flow_limit);
    grid.validate();
    return grid;
}

GridCase make_triangle() {
    GridCase grid;
    grid.bus_count = 3;
    grid.branches = {{1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 1.0}};
    grid.injections0 = Eigen::Vector3d(1.0, -1.0, 0.0);
    grid.injection_lower = Eigen::Vector3d(0.0, -2.0, 0.0);
    grid.injection_upper = Eigen::Vector3d(2.0, 0.0, 0.0);
    grid.flow_thresholds = Eigen::VectorXd::Constant(3, 2.0);
    grid.validate();
    return grid;
}

GridCase make_five_branch_toy() {
    GridCase grid;
    grid.bus_count = 4;
    grid.branches = {{1, 2, 2.0}, {2, 3, 1.0}, {3, 4, 1.0}, {4, 1, 1.0}, {1, 3, 1.0}};
    grid.injections0 = Eigen::Vector4d(1.5, -0.5, 0.5, -1.5);
    grid.injection_lower = Eigen::Vector4d(0.0, -3.0, 0.0, -3.0);
    grid.injection_upper = Eigen::Vector4d(3.0, 0.0, 3.0, 0.0);
    grid.flow_thresholds = Eigen::VectorXd::Zero(5);
    // Thresholds 1.3x the base flow keep every base ratio at ~0.77, just
    // under the ramp; single outages push neighbours into it.
    FlowSolution base;
    {
        // local solve to avoid a dependency cycle in fixture setup
        grid.flow_thresholds = Eigen::VectorXd::Constant(5, 1.0);
        base = solve_flow(grid, TopologyState::all_on(5), grid.injections0);
    }
    for (int l = 0; l < 5; ++l)
        grid.flow_thresholds[l] = std::max(1.3 * std::abs(base.flows[l]), 0.15);
    grid.validate();
    return grid;
}

GridCase load_ieee118() {
    return load_case(data_path("case118.m"), CaseFormat::matpower);
}

std::vector<std::vector<int>> bfs_islands(const GridCase& grid, const TopologyState& state) {
    std::vector<std::vector<int>> adj(grid.bus_count + 1);
    for (int l = 1; l <= grid.branch_count(); ++l) {
        if (!state.is_on(l)) continue;
        adj[grid.branches[l - 1].from].push_back(grid.branches[l - 1].to);
        adj[grid.branches[l - 1].to].push_back(grid.branches[l - 1].from);
    }
    std::vector<bool> seen(grid.bus_count + 1, false);
    std::vector<std::vector<int>> out;
    for (int start = 1; start <= grid.bus_count; ++start) {
        if (seen[start]) continue;
        std::vector<int> comp;
        std::queue<int> q;
        q.push(start);
        seen[start] = true;
        while (!q.empty()) {
            int b = q.front();
            q.pop();
            comp.push_back(b);
            for (int nb : adj[b])
                if (!seen[nb]) {
                    seen[nb] = true;
                    q.push(nb);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

namespace {

struct LinearConstraints {
    // Equalities Ex = f, inequalities Cx <= d.
    Eigen::MatrixXd E, C;
    Eigen::VectorXd f, d;
};

LinearConstraints linearize(const std::vector<ElementaryConvexSet>& sets, int dim) {
    std::vector<Eigen::VectorXd> eq_rows, ineq_rows;
    std::vector<double> eq_rhs, ineq_rhs;
    for (const auto& s : sets) {
        switch (s.kind) {
            case ElementaryConvexSet::Kind::hyperplane:
                eq_rows.push_back(s.a);
                eq_rhs.push_back(s.b);
                break;
            case ElementaryConvexSet::Kind::halfspace:
                ineq_rows.push_back(s.a);
                ineq_rhs.push_back(s.b);
                break;
            case ElementaryConvexSet::Kind::box:
                for (int i = 0; i < dim; ++i) {
                    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
                    e[i] = 1.0;
                    ineq_rows.push_back(e);
                    ineq_rhs.push_back(s.hi[i]);
                    ineq_rows.push_back(-e);
                    ineq_rhs.push_back(-s.lo[i]);
                }
                break;
        }
    }
    LinearConstraints lc;
    lc.E.resize(eq_rows.size(), dim);
    lc.f.resize(eq_rows.size());
    for (std::size_t i = 0; i < eq_rows.size(); ++i) {
        lc.E.row(i) = eq_rows[i].transpose();
        lc.f[i] = eq_rhs[i];
    }
    lc.C.resize(ineq_rows.size(), dim);
    lc.d.resize(ineq_rows.size());
    for (std::size_t i = 0; i < ineq_rows.size(); ++i) {
        lc.C.row(i) = ineq_rows[i].transpose();
        lc.d[i] = ineq_rhs[i];
    }
    return lc;
}

bool feasible_point(const Eigen::VectorXd& x, const LinearConstraints& lc, double tol) {
    if (lc.E.rows() > 0 && (lc.E * x - lc.f).lpNorm<Eigen::Infinity>() > tol) return false;
    if (lc.C.rows() > 0 && ((lc.C * x - lc.d).array() > tol).any()) return false;
    return true;
}

// Equality-constrained projection of o onto {x | Ax = b}.
Eigen::VectorXd project_affine(const Eigen::VectorXd& o, const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& b) {
    if (A.rows() == 0) return o;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A * A.transpose());
    return o - A.transpose() * cod.solve(A * o - b);
}

}  // namespace

Eigen::VectorXd oracle_project(const Eigen::VectorXd& origin,
                               const std::vector<ElementaryConvexSet>& sets) {
    const int dim = static_cast<int>(origin.size());
    const LinearConstraints lc = linearize(sets, dim);
    const int k = static_cast<int>(lc.C.rows());

    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x;

    // All inequality active-sets of size <= dim; equalities always active.
    std::vector<int> subset;
    auto consider = [&]() {
        Eigen::MatrixXd A(lc.E.rows() + subset.size(), dim);
        Eigen::VectorXd b(A.rows());
        A.topRows(lc.E.rows()) = lc.E;
        b.head(lc.E.rows()) = lc.f;
        for (std::size_t i = 0; i < subset.size(); ++i) {
            A.row(lc.E.rows() + i) = lc.C.row(subset[i]);
            b[lc.E.rows() + i] = lc.d[subset[i]];
        }
        const Eigen::VectorXd x = project_affine(origin, A, b);
        if (!feasible_point(x, lc, 1e-8)) return;
        const double dist = (x - origin).norm();
        if (dist < best) {
            best = dist;
            best_x = x;
        }
    };
    auto recurse = [&](auto&& self, int start) -> void {
        consider();
        if (static_cast<int>(subset.size()) >= dim) return;
        for (int i = start; i < k; ++i) {
            subset.push_back(i);
            self(self, i + 1);
            subset.pop_back();
        }
    };
    recurse(recurse, 0);
    if (!std::isfinite(best))
        throw std::runtime_error("oracle found no feasible candidate");
    return best_x;
}

double nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd* x_out) {
    const int n = static_cast<int>(A.cols());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::set<int> passive;
    for (int outer = 0; outer < 10 * n + 50; ++outer) {
        const Eigen::VectorXd w = A.transpose() * (b - A * x);
        int best = -1;
        double best_w = 1e-12;
        for (int i = 0; i < n; ++i)
            if (!passive.count(i) && w[i] > best_w) {
                best_w = w[i];
                best = i;
            }
        if (best < 0) break;
        passive.insert(best);
        while (true) {
            Eigen::MatrixXd Ap(A.rows(), passive.size());
            std::vector<int> idx(passive.begin(), passive.end());
            for (std::size_t i = 0; i < idx.size(); ++i) Ap.col(i) = A.col(idx[i]);
            const Eigen::VectorXd z =
                Ap.completeOrthogonalDecomposition().solve(b);
            if ((z.array() > 0).all()) {
                x.setZero();
                for (std::size_t i = 0; i < idx.size(); ++i) x[idx[i]] = z[i];
                break;
            }
            double alpha = 1.0;
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (z[i] <= 0) alpha = std::min(alpha, x[idx[i]] / (x[idx[i]] - z[i]));
            for (std::size_t i = 0; i < idx.size(); ++i)
                x[idx[i]] += alpha * (z[i] - x[idx[i]]);
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (x[idx[i]] <= 1e-14) passive.erase(idx[i]);
            if (passive.empty()) break;
        }
    }
    if (x_out) *x_out = x;
    return (A * x - b).norm();
}

double kkt_residual(const Eigen::VectorXd& origin, const Eigen::VectorXd& solution,
                    const std::vector<ElementaryConvexSet>& sets, double active_tol) {
    const int dim = static_cast<int>(origin.size());
    const LinearConstraints lc = linearize(sets, dim);

    std::vector<Eigen::VectorXd> cols;
    for (int i = 0; i < lc.E.rows(); ++i) {
        // Hyperplane multipliers are sign-free: include both directions.
        cols.push_back(lc.E.row(i).transpose());
        cols.push_back(-lc.E.row(i).transpose());
    }
    for (int i = 0; i < lc.C.rows(); ++i)
        if (lc.C.row(i) * solution - lc.d[i] > -active_tol)
            cols.push_back(lc.C.row(i).transpose());
    Eigen::MatrixXd A(dim, cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) A.col(i) = cols[i];

    const Eigen::VectorXd target = origin - solution;
    if (cols.empty()) return target.norm();
    return nnls(A, target);
}

RandomInstance make_random_polyhedron(std::mt19937_64& rng, int dim, int extra_sets) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    RandomInstance inst;
    inst.interior_point = Eigen::VectorXd::NullaryExpr(dim, [&](int) { return 0.5 * unif(rng); });

    Eigen::VectorXd lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
        lo[i] = inst.interior_point[i] - 0.2 - std::abs(unif(rng));
        hi[i] = inst.interior_point[i] + 0.2 + std::abs(unif(rng));
    }
    inst.sets.push_back(ElementaryConvexSet::make_box(lo, hi));

    for (int s = 0; s < extra_sets; ++s) {
        Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(dim, [&](int) { return unif(rng); });
        if (a.norm() < 1e-3) a[0] = 1.0;
        const double along = a.dot(inst.interior_point);
        if (s % 3 == 0)
            inst.sets.push_back(ElementaryConvexSet::make_hyperplane(a, along));
        else
            inst.sets.push_back(
                ElementaryConvexSet::make_halfspace(a, along + 0.05 + std::abs(unif(rng))));
    }
    inst.origin = Eigen::VectorXd::NullaryExpr(dim, [&](int) { return 2.0 * unif(rng); });
    return inst;
}

}  // namespace gridcast::testing
