#include "gridcast/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gridcast/dc_flow.hpp"

namespace gridcast {

namespace {

void synthesize_thresholds(GridCase& grid, const std::vector<bool>& missing,
                           const LoadOptions& options, std::vector<std::string>* warnings) {
    bool any = false;
    for (bool b : missing) any = any || b;
    if (!any) return;
    FlowSolution base = solve_flow(grid, TopologyState::all_on(grid.branch_count()), grid.injections0);
    int count = 0;
    for (int l = 0; l < grid.branch_count(); ++l) {
        if (!missing[l]) continue;
        double sigma = options.threshold_multiplier * std::abs(base.flows[l]);
        grid.flow_thresholds[l] = std::max(sigma, options.threshold_floor);
        ++count;
    }
    if (warnings)
        warnings->push_back("thresholds synthesized for " + std::to_string(count) +
                            " branch(es) as " + std::to_string(options.threshold_multiplier) +
                            " x |base-case flow| (floor " + std::to_string(options.threshold_floor) + " p.u.)");
}

GridCase load_native(const std::string& path, const LoadOptions& options,
                     std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw GridError(ErrorCode::parse_error, "cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw GridError(ErrorCode::parse_error, std::string("malformed JSON: ") + e.what());
    }

    GridCase grid;
    try {
        grid.base_mva = doc.value("base_mva", 100.0);
        const auto& buses = doc.at("buses");
        const auto& branches = doc.at("branches");
        const int m = static_cast<int>(buses.size());
        grid.bus_count = m;
        grid.injections0 = Eigen::VectorXd::Zero(m);
        grid.injection_lower = Eigen::VectorXd::Zero(m);
        grid.injection_upper = Eigen::VectorXd::Zero(m);
        for (const auto& bus : buses) {
            const int id = bus.at("id").get<int>();
            if (id < 1 || id > m)
                throw GridError(ErrorCode::parse_error, "bus ids must be dense and 1-based");
            grid.injections0[id - 1] = bus.at("p0").get<double>();
            grid.injection_lower[id - 1] = bus.at("p_min").get<double>();
            grid.injection_upper[id - 1] = bus.at("p_max").get<double>();
        }
        const int n = static_cast<int>(branches.size());
        grid.branches.resize(n);
        grid.flow_thresholds = Eigen::VectorXd::Zero(n);
        std::vector<bool> missing(n, false);
        for (const auto& br : branches) {
            const int id = br.at("id").get<int>();
            if (id < 1 || id > n)
                throw GridError(ErrorCode::parse_error, "branch ids must be dense and 1-based");
            grid.branches[id - 1].from = br.at("from").get<int>();
            grid.branches[id - 1].to = br.at("to").get<int>();
            grid.branches[id - 1].susceptance = br.at("susceptance").get<double>();
            if (br.contains("flow_limit") && br.at("flow_limit").get<double>() > 0.0)
                grid.flow_thresholds[id - 1] = br.at("flow_limit").get<double>();
            else
                missing[id - 1] = true;
        }
        // Endpoints and susceptances must be sound before the synthesis solve.
        for (int l = 0; l < n; ++l) {
            const Branch& b = grid.branches[l];
            if (b.from < 1 || b.from > m || b.to < 1 || b.to > m || b.from == b.to ||
                b.susceptance == 0.0)
                throw GridError(ErrorCode::invalid_case,
                                "branch " + std::to_string(l + 1) + " has invalid endpoints or susceptance");
        }
        synthesize_thresholds(grid, missing, options, warnings);
    } catch (const nlohmann::json::exception& e) {
        throw GridError(ErrorCode::parse_error, std::string("missing or mistyped field: ") + e.what());
    }
    grid.validate();
    return grid;
}

// --- MATPOWER .m import (best effort: DC-relevant fields only) ---

std::vector<std::vector<double>> parse_matrix(const std::string& text, const std::string& name) {
    const std::string key = "mpc." + name;
    std::size_t pos = text.find(key);
    if (pos == std::string::npos)
        throw GridError(ErrorCode::parse_error, "missing " + key + " matrix");
    pos = text.find('[', pos);
    std::size_t end = text.find(']', pos);
    if (pos == std::string::npos || end == std::string::npos)
        throw GridError(ErrorCode::parse_error, key + " matrix not delimited by [ ]");
    std::string body = text.substr(pos + 1, end - pos - 1);
    // Strip MATLAB comments.
    std::string clean;
    bool in_comment = false;
    for (char c : body) {
        if (c == '%') in_comment = true;
        if (c == '\n') in_comment = false;
        if (!in_comment) clean += c;
    }
    std::vector<std::vector<double>> rows;
    std::string row_text;
    auto flush_row = [&]() {
        std::istringstream rs(row_text);
        std::vector<double> row;
        double v;
        while (rs >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
        row_text.clear();
    };
    for (char c : clean) {
        if (c == ';' || c == '\n')
            flush_row();
        else
            row_text += c;
    }
    flush_row();
    return rows;
}

double parse_scalar(const std::string& text, const std::string& name, double fallback) {
    const std::string key = "mpc." + name;
    std::size_t pos = text.find(key);
    if (pos == std::string::npos) return fallback;
    pos = text.find('=', pos);
    if (pos == std::string::npos) return fallback;
    std::istringstream in(text.substr(pos + 1));
    double v;
    if (in >> v) return v;
    return fallback;
}

GridCase load_matpower(const std::string& path, const LoadOptions& options,
                       std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw GridError(ErrorCode::parse_error, "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    GridCase grid;
    grid.base_mva = parse_scalar(text, "baseMVA", 100.0);
    const double base = grid.base_mva;

    const auto bus = parse_matrix(text, "bus");
    const auto gen = parse_matrix(text, "gen");
    const auto branch = parse_matrix(text, "branch");

    const int m = static_cast<int>(bus.size());
    grid.bus_count = m;
    // Bus numbers may be arbitrary; map them to dense 1..m in file order.
    std::map<int, int> bus_index;
    Eigen::VectorXd pd = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        if (bus[i].size() < 3) throw GridError(ErrorCode::parse_error, "bus row too short");
        bus_index[static_cast<int>(bus[i][0])] = i + 1;
        pd[i] = bus[i][2] / base;
    }

    Eigen::VectorXd pg = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd pg_min = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd pg_max = Eigen::VectorXd::Zero(m);
    for (const auto& g : gen) {
        if (g.size() < 10) throw GridError(ErrorCode::parse_error, "gen row too short");
        const int status = static_cast<int>(g[7]);
        if (status <= 0) continue;
        auto it = bus_index.find(static_cast<int>(g[0]));
        if (it == bus_index.end())
            throw GridError(ErrorCode::parse_error, "gen references unknown bus");
        const int i = it->second - 1;
        pg[i] += g[1] / base;
        pg_max[i] += g[8] / base;
        pg_min[i] += g[9] / base;
    }

    grid.injections0 = pg - pd;
    grid.injection_lower = Eigen::VectorXd::Zero(m);
    grid.injection_upper = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        // Load contributes [-Pd, 0] (full shed allowed); generation
        // contributes its dispatch range, widened to include Pg.
        double lo = -pd[i] + std::min(pg_min[i], pg[i]);
        double hi = std::max(pg_max[i], pg[i]);
        grid.injection_lower[i] = std::min(lo, grid.injections0[i]);
        grid.injection_upper[i] = std::max(hi, grid.injections0[i]);
    }

    const int n = static_cast<int>(branch.size());
    grid.branches.resize(n);
    grid.flow_thresholds = Eigen::VectorXd::Zero(n);
    std::vector<bool> missing(n, false);
    for (int l = 0; l < n; ++l) {
        if (branch[l].size() < 6) throw GridError(ErrorCode::parse_error, "branch row too short");
        auto fit = bus_index.find(static_cast<int>(branch[l][0]));
        auto tit = bus_index.find(static_cast<int>(branch[l][1]));
        if (fit == bus_index.end() || tit == bus_index.end())
            throw GridError(ErrorCode::parse_error, "branch references unknown bus");
        grid.branches[l].from = fit->second;
        grid.branches[l].to = tit->second;
        const double x = branch[l][3];
        if (x == 0.0)
            throw GridError(ErrorCode::invalid_case,
                            "branch " + std::to_string(l + 1) + " has zero reactance");
        grid.branches[l].susceptance = 1.0 / x;
        const double rate_a = branch[l][5];
        if (rate_a > 0.0)
            grid.flow_thresholds[l] = rate_a / base;
        else
            missing[l] = true;
    }

    synthesize_thresholds(grid, missing, options, warnings);
    grid.validate();
    return grid;
}

}  // namespace

GridCase load_case(const std::string& path, CaseFormat format, const LoadOptions& options,
                   std::vector<std::string>* warnings) {
    switch (format) {
        case CaseFormat::native_json: return load_native(path, options, warnings);
        case CaseFormat::matpower: return load_matpower(path, options, warnings);
    }
    throw GridError(ErrorCode::parse_error, "unknown case format");
}

}  // namespace gridcast
