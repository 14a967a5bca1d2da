#include "gridcast/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "gridcast/dc_flow.hpp"

namespace gridcast {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GridCase load_scenario_case(const Scenario& scenario, std::vector<std::string>* warnings) {
    LoadOptions options;
    options.threshold_multiplier = scenario.threshold_multiplier;
    options.threshold_floor = scenario.threshold_floor;
    return load_case(scenario.case_path, scenario.format, options, warnings);
}

nlohmann::json state_json(const TopologyState& s) {
    return {{"hex", s.hex()}, {"outaged", s.outaged_branches()}};
}

}  // namespace

void Scenario::validate() const {
    if (case_path.empty()) throw GridError(ErrorCode::parse_error, "scenario lacks a case path");
    double total = 0.0;
    for (const auto& [branches, p] : initial_contingencies) {
        if (p <= 0.0 || p > 1.0)
            throw GridError(ErrorCode::invalid_case, "contingency probabilities must lie in (0,1]");
        total += p;
    }
    if (total > 1.0 + 1e-12)
        throw GridError(ErrorCode::invalid_case, "initial contingency probabilities exceed 1");
    if (horizon < 1) throw GridError(ErrorCode::invalid_case, "horizon must be at least 1");
    if (protect_at_step < 1 || protect_at_step > horizon)
        throw GridError(ErrorCode::invalid_case, "protect_at_step must lie in [1, horizon]");
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw GridError(ErrorCode::invalid_case, "epsilon must lie in [0,1)");
    if (beam_width < 1) throw GridError(ErrorCode::invalid_case, "beam_width must be at least 1");
    if (dykstra_n < 1) throw GridError(ErrorCode::invalid_case, "dykstra_n must be at least 1");
    if (!(feasibility_tol > 0.0))
        throw GridError(ErrorCode::invalid_case, "feasibility_tol must be positive");
    outage.validate();
}

Scenario Scenario::from_json(const nlohmann::json& doc, const std::string& base_dir) {
    Scenario s;
    try {
        std::filesystem::path p = doc.at("case").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        s.case_path = p.string();
        const std::string fmt = doc.value("format", std::string("native_json"));
        if (fmt == "native_json")
            s.format = CaseFormat::native_json;
        else if (fmt == "matpower")
            s.format = CaseFormat::matpower;
        else
            throw GridError(ErrorCode::parse_error, "unknown case format: " + fmt);
        for (const auto& c : doc.value("initial_contingencies", nlohmann::json::array()))
            s.initial_contingencies.emplace_back(c.at("branches").get<std::vector<int>>(),
                                                 c.at("probability").get<double>());
        s.horizon = doc.value("horizon", s.horizon);
        s.protect_at_step = doc.value("protect_at_step", s.horizon);
        s.epsilon = doc.value("epsilon", s.epsilon);
        s.threshold_multiplier = doc.value("threshold_multiplier", s.threshold_multiplier);
        s.threshold_floor = doc.value("threshold_floor", s.threshold_floor);
        s.beam_width = doc.value("beam_width", s.beam_width);
        s.dykstra_n = doc.value("dykstra_n", s.dykstra_n);
        s.feasibility_tol = doc.value("feasibility_tol", s.feasibility_tol);
        s.seed = doc.value("seed", s.seed);
        if (doc.contains("outage")) {
            const auto& o = doc.at("outage");
            s.outage.p_cont = o.value("p_cont", s.outage.p_cont);
            s.outage.p_hidden_adjacent = o.value("p_hidden_adjacent", s.outage.p_hidden_adjacent);
            s.outage.p_hidden_far = o.value("p_hidden_far", s.outage.p_hidden_far);
            s.outage.overload_lower = o.value("overload_lower", s.outage.overload_lower);
            s.outage.overload_upper = o.value("overload_upper", s.outage.overload_upper);
            s.outage.lambda_floor = o.value("lambda_floor", s.outage.lambda_floor);
            s.outage.max_candidates = o.value("max_candidates", s.outage.max_candidates);
            s.outage.exact_survivor_factors =
                o.value("exact_survivor_factors", s.outage.exact_survivor_factors);
        }
    } catch (const nlohmann::json::exception& e) {
        throw GridError(ErrorCode::parse_error, std::string("scenario field error: ") + e.what());
    }
    s.validate();
    return s;
}

Scenario Scenario::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GridError(ErrorCode::parse_error, "cannot open scenario " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw GridError(ErrorCode::parse_error, std::string("malformed scenario JSON: ") + e.what());
    }
    return from_json(doc, std::filesystem::path(path).parent_path().string());
}

SparseDistribution initial_distribution(const GridCase& grid, const Scenario& scenario) {
    SparseDistribution x0;
    x0.step = 0;
    if (scenario.initial_contingencies.empty()) {
        x0.entries[TopologyState::all_on(grid.branch_count())] = 1.0;
        return x0;
    }
    for (const auto& [branches, p] : scenario.initial_contingencies) {
        for (int l : branches)
            if (l < 1 || l > grid.branch_count())
                throw GridError(ErrorCode::invalid_case,
                                "initial contingency references branch " + std::to_string(l));
        x0.entries[TopologyState::all_on(grid.branch_count()).with_outaged(branches)] += p;
    }
    return x0;
}

nlohmann::json RunReport::to_json(bool include_timings) const {
    nlohmann::json doc;
    doc["grid"] = {{"bus_count", bus_count}, {"branch_count", branch_count}};
    doc["bound"] = bound;

    nlohmann::json path_list = nlohmann::json::array();
    for (const auto& p : paths) {
        nlohmann::json steps = nlohmann::json::array();
        for (const auto& s : p.steps) steps.push_back(s);
        path_list.push_back({{"steps", steps},
                             {"probability", p.probability},
                             {"terminal", state_json(p.terminal_state)}});
    }
    doc["paths"] = path_list;

    nlohmann::json d_eps = nlohmann::json::array();
    for (std::size_t k = 1; k < trajectory.size(); ++k) {
        nlohmann::json step_states = nlohmann::json::array();
        for (const auto& [state, p] : trajectory[k].entries) {
            nlohmann::json entry = state_json(state);
            entry["probability"] = p;
            step_states.push_back(entry);
        }
        d_eps.push_back({{"step", int(k)}, {"states", step_states}});
    }
    doc["d_epsilon"] = d_eps;

    if (protected_run) {
        doc["delta_pb"] = std::vector<double>(delta_pb.data(), delta_pb.data() + delta_pb.size());
        nlohmann::json diag = nlohmann::json::array();
        for (const auto& c : solver.increments)
            diag.push_back({{"cycle", c.cycle},
                            {"max_violation", c.max_violation},
                            {"movement", c.movement}});
        doc["solver"] = {{"converged", solver.converged},
                         {"iterations", solver.iterations},
                         {"max_violation", solver.max_violation},
                         {"cycles", diag}};
    }
    doc["warnings"] = warnings;
    if (include_timings) doc["timings_seconds"] = timings_seconds;
    return doc;
}

RunReport run_predict(const Scenario& scenario) {
    scenario.validate();
    RunReport report;
    auto t0 = std::chrono::steady_clock::now();
    const GridCase grid = load_scenario_case(scenario, &report.warnings);
    report.bus_count = grid.bus_count;
    report.branch_count = grid.branch_count();
    report.timings_seconds["load"] = seconds_since(t0);

    const SparseDistribution x0 = initial_distribution(grid, scenario);
    LambdaCache cache;

    t0 = std::chrono::steady_clock::now();
    report.trajectory = propagate(grid, x0, scenario.outage, scenario.epsilon, scenario.horizon, &cache);
    report.bound = prevention_bound(report.trajectory, scenario.protect_at_step);
    report.timings_seconds["propagate"] = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    report.paths = beam_paths(grid, x0, scenario.outage, scenario.beam_width, scenario.horizon, &cache);
    report.timings_seconds["beam"] = seconds_since(t0);
    return report;
}

RunReport run_protect(const Scenario& scenario) {
    RunReport report = run_predict(scenario);
    const GridCase grid = load_scenario_case(scenario, nullptr);

    const std::set<TopologyState> d_eps =
        uncertainty_set(report.trajectory, scenario.epsilon, scenario.protect_at_step);
    if (d_eps.empty())
        throw GridError(ErrorCode::empty_intersection, "no retained states to protect against");

    auto t0 = std::chrono::steady_clock::now();
    ProtectionSolution sol = solve_protection(grid, d_eps, scenario.dykstra_n,
                                              scenario.feasibility_tol, report.bound);
    report.timings_seconds["protect"] = seconds_since(t0);
    report.delta_pb = std::move(sol.delta);
    report.solver = std::move(sol.result);
    report.protected_run = true;
    return report;
}

void write_report(const RunReport& report, const std::string& out_dir, bool include_timings) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    std::ofstream json_out(dir / "report.json");
    json_out << report.to_json(include_timings).dump(2) << "\n";

    std::ofstream delta_out(dir / "delta_p.csv");
    delta_out << "bus_id,delta_p\n";
    for (int i = 0; i < report.delta_pb.size(); ++i) {
        delta_out << (i + 1) << "," << nlohmann::json(report.delta_pb[i]).dump() << "\n";
    }

    std::ofstream paths_out(dir / "paths.csv");
    paths_out << "rank,probability,steps\n";
    for (std::size_t r = 0; r < report.paths.size(); ++r) {
        const auto& p = report.paths[r];
        paths_out << (r + 1) << "," << nlohmann::json(p.probability).dump() << ",\"";
        for (std::size_t k = 0; k < p.steps.size(); ++k) {
            if (k) paths_out << " -> ";
            paths_out << "(";
            for (std::size_t i = 0; i < p.steps[k].size(); ++i) {
                if (i) paths_out << " ";
                paths_out << p.steps[k][i];
            }
            paths_out << ")";
        }
        paths_out << "\"\n";
    }
}

std::vector<FlowRow> run_flow(const std::string& case_path, CaseFormat format,
                              const std::vector<int>& outaged_branches,
                              const Eigen::VectorXd* injections_override) {
    const GridCase grid = load_case(case_path, format);
    const TopologyState state =
        TopologyState::all_on(grid.branch_count()).with_outaged(outaged_branches);
    const Eigen::VectorXd& inj = injections_override ? *injections_override : grid.injections0;
    const FlowSolution sol = solve_flow(grid, state, inj);

    OutageParams params;
    std::vector<FlowRow> rows;
    for (int l = 1; l <= grid.branch_count(); ++l) {
        FlowRow row;
        row.branch = l;
        row.from = grid.branches[l - 1].from;
        row.to = grid.branches[l - 1].to;
        row.flow = sol.flows[l - 1];
        row.threshold = grid.flow_thresholds[l - 1];
        row.ratio = std::abs(row.flow) / row.threshold;
        row.overloaded = state.is_on(l) && row.ratio >= params.overload_lower;
        rows.push_back(row);
    }
    return rows;
}

ValidationReport run_validate(const std::string& case_path, CaseFormat format) {
    ValidationReport report;
    std::vector<std::string> warnings;
    try {
        const GridCase grid = load_case(case_path, format, {}, &warnings);
        for (const auto& w : warnings) report.messages.push_back("warning: " + w);
        const auto isles = islands(grid, TopologyState::all_on(grid.branch_count()));
        report.messages.push_back("case valid: " + std::to_string(grid.bus_count) + " buses, " +
                                  std::to_string(grid.branch_count()) + " branches, " +
                                  std::to_string(isles.size()) + " island(s)");
        report.ok = true;
    } catch (const GridError& e) {
        report.messages.push_back(e.what());
        report.ok = false;
    }
    return report;
}

}  // namespace gridcast
