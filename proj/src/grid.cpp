#include "gridcast/grid.hpp"

#include <cmath>
#include <numeric>

namespace gridcast {

void GridCase::validate() const {
    const int m = bus_count;
    const int n = branch_count();
    if (m <= 0) throw GridError(ErrorCode::invalid_case, "bus_count must be positive");
    if (n <= 0) throw GridError(ErrorCode::invalid_case, "branch_count must be positive");
    if (base_mva <= 0.0) throw GridError(ErrorCode::invalid_case, "base_power must be positive");
    for (int l = 0; l < n; ++l) {
        const Branch& br = branches[l];
        if (br.from < 1 || br.from > m || br.to < 1 || br.to > m)
            throw GridError(ErrorCode::invalid_case,
                            "branch " + std::to_string(l + 1) + " endpoint outside [1, m]");
        if (br.from == br.to)
            throw GridError(ErrorCode::invalid_case,
                            "branch " + std::to_string(l + 1) + " is a self-loop");
        if (!std::isfinite(br.susceptance) || br.susceptance == 0.0)
            throw GridError(ErrorCode::invalid_case,
                            "branch " + std::to_string(l + 1) + " susceptance must be nonzero and finite");
    }
    if (injections0.size() != m)
        throw GridError(ErrorCode::invalid_case, "injections0 length must equal bus_count");
    if (injection_lower.size() != m || injection_upper.size() != m)
        throw GridError(ErrorCode::invalid_case, "injection_bounds length must equal bus_count");
    if (flow_thresholds.size() != n)
        throw GridError(ErrorCode::invalid_case, "flow_thresholds length must equal branch_count");
    for (int j = 0; j < n; ++j)
        if (!(flow_thresholds[j] > 0.0))
            throw GridError(ErrorCode::invalid_case,
                            "flow_threshold of branch " + std::to_string(j + 1) + " must be positive");
    for (int i = 0; i < m; ++i) {
        if (!(injection_lower[i] <= injection_upper[i]))
            throw GridError(ErrorCode::invalid_case,
                            "injection bounds of bus " + std::to_string(i + 1) + " must satisfy lower <= upper");
        if (injections0[i] < injection_lower[i] - 1e-12 || injections0[i] > injection_upper[i] + 1e-12)
            throw GridError(ErrorCode::invalid_case,
                            "injections0 of bus " + std::to_string(i + 1) + " lies outside its bounds");
    }
}

Eigen::SparseMatrix<double> incidence(const GridCase& grid) {
    const int n = grid.branch_count();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * n);
    for (int l = 0; l < n; ++l) {
        trips.emplace_back(l, grid.branches[l].from - 1, +1.0);
        trips.emplace_back(l, grid.branches[l].to - 1, -1.0);
    }
    Eigen::SparseMatrix<double> A(n, grid.bus_count);
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int size) : parent(size) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::vector<std::vector<int>> islands(const GridCase& grid, const TopologyState& state) {
    if (state.branch_count() != grid.branch_count())
        throw GridError(ErrorCode::dimension_mismatch, "state bit-length does not match branch_count");
    UnionFind uf(grid.bus_count);
    for (int l = 1; l <= grid.branch_count(); ++l) {
        if (!state.is_on(l)) continue;
        const Branch& br = grid.branches[l - 1];
        uf.unite(br.from - 1, br.to - 1);
    }
    std::vector<std::vector<int>> groups(grid.bus_count);
    for (int b = 0; b < grid.bus_count; ++b) groups[uf.find(b)].push_back(b + 1);
    std::vector<std::vector<int>> out;
    for (auto& g : groups)
        if (!g.empty()) out.push_back(std::move(g));
    return out;
}

}  // namespace gridcast
