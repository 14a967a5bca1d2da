#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gridcast/pipeline.hpp"

namespace {

int exit_code_for(const gridcast::GridError& e) {
    using gridcast::ErrorCode;
    switch (e.code()) {
        case ErrorCode::parse_error:
        case ErrorCode::invalid_case:
        case ErrorCode::dimension_mismatch:
            return 1;
        case ErrorCode::empty_intersection:
            return 2;
        default:
            return 3;
    }
}

struct CommonOptions {
    std::string scenario_path;
    std::string out_dir = "out";
    bool no_timings = false;
    std::string log_level = "info";
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon;
    std::optional<int> horizon;
    std::optional<int> beam;
};

void add_scenario_options(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--scenario", opts.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_flag("--no-timings", opts.no_timings, "Strip wall-clock timings from the report");
    cmd->add_option("--seed", opts.seed, "Override the scenario seed");
    cmd->add_option("--epsilon", opts.epsilon, "Override the truncation threshold");
    cmd->add_option("--horizon", opts.horizon, "Override the cascading-step horizon");
    cmd->add_option("--beam", opts.beam, "Override the beam width");
    cmd->add_option("--log-level", opts.log_level, "error|warn|info");
}

gridcast::Scenario load_scenario(const CommonOptions& opts) {
    gridcast::Scenario s = gridcast::Scenario::from_file(opts.scenario_path);
    if (opts.seed) s.seed = *opts.seed;
    if (opts.epsilon) s.epsilon = *opts.epsilon;
    if (opts.horizon) {
        s.horizon = *opts.horizon;
        s.protect_at_step = std::min(s.protect_at_step, s.horizon);
    }
    if (opts.beam) s.beam_width = *opts.beam;
    s.validate();
    return s;
}

void print_summary(const gridcast::RunReport& report, const std::string& out_dir,
                   const std::string& log_level) {
    if (log_level == "error") return;
    std::cout << "bound at protect step: " << report.bound << "\n";
    std::cout << "top paths:\n";
    for (std::size_t r = 0; r < report.paths.size() && r < 5; ++r) {
        const auto& p = report.paths[r];
        std::cout << "  p=" << p.probability << "  ";
        for (std::size_t k = 0; k < p.steps.size(); ++k) {
            if (k) std::cout << " -> ";
            std::cout << "(";
            for (std::size_t i = 0; i < p.steps[k].size(); ++i)
                std::cout << (i ? " " : "") << p.steps[k][i];
            std::cout << ")";
        }
        std::cout << "\n";
    }
    if (report.protected_run) {
        std::cout << "dykstra: " << (report.solver.converged ? "converged" : "NOT converged")
                  << " after " << report.solver.iterations
                  << " cycles, max violation " << report.solver.max_violation << "\n";
        std::cout << "total |delta P| shed/adjusted: " << report.delta_pb.lpNorm<1>() << " p.u.\n";
    }
    std::cout << "report written to " << out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cascading-failure path prediction and robust injection protection"};
    app.require_subcommand(1);

    CommonOptions predict_opts, protect_opts;
    auto* predict = app.add_subcommand("predict", "Predict high-probability cascading paths");
    add_scenario_options(predict, predict_opts);
    auto* protect = app.add_subcommand("protect", "Predict, then compute the injection adjustment");
    add_scenario_options(protect, protect_opts);

    std::string flow_case, flow_format = "native_json";
    std::vector<int> flow_outages;
    auto* flow = app.add_subcommand("flow", "Print per-branch DC flows and overload ratios");
    flow->add_option("--case", flow_case, "Case file")->required();
    flow->add_option("--format", flow_format, "native_json|matpower");
    flow->add_option("--outage", flow_outages, "Branch IDs to sever before solving");

    std::string validate_case, validate_format = "native_json";
    auto* validate = app.add_subcommand("validate", "Check case-file invariants");
    validate->add_option("--case", validate_case, "Case file")->required();
    validate->add_option("--format", validate_format, "native_json|matpower");

    CLI11_PARSE(app, argc, argv);

    auto parse_format = [](const std::string& f) {
        if (f == "matpower") return gridcast::CaseFormat::matpower;
        if (f == "native_json") return gridcast::CaseFormat::native_json;
        throw gridcast::GridError(gridcast::ErrorCode::parse_error, "unknown format " + f);
    };

    try {
        if (predict->parsed()) {
            const auto scenario = load_scenario(predict_opts);
            const auto report = gridcast::run_predict(scenario);
            gridcast::write_report(report, predict_opts.out_dir, !predict_opts.no_timings);
            print_summary(report, predict_opts.out_dir, predict_opts.log_level);
        } else if (protect->parsed()) {
            const auto scenario = load_scenario(protect_opts);
            const auto report = gridcast::run_protect(scenario);
            gridcast::write_report(report, protect_opts.out_dir, !protect_opts.no_timings);
            print_summary(report, protect_opts.out_dir, protect_opts.log_level);
        } else if (flow->parsed()) {
            const auto rows = gridcast::run_flow(flow_case, parse_format(flow_format), flow_outages);
            std::printf("%6s %5s %5s %12s %12s %8s %s\n", "branch", "from", "to", "flow", "limit",
                        "ratio", "flag");
            for (const auto& r : rows)
                std::printf("%6d %5d %5d %12.6f %12.6f %8.4f %s\n", r.branch, r.from, r.to, r.flow,
                            r.threshold, r.ratio, r.overloaded ? "OVERLOAD" : "");
        } else if (validate->parsed()) {
            const auto report = gridcast::run_validate(validate_case, parse_format(validate_format));
            for (const auto& msg : report.messages) std::cout << msg << "\n";
            return report.ok ? 0 : 1;
        }
    } catch (const gridcast::GridError& e) {
        std::cerr << e.what() << "\n";
        if (e.code() == gridcast::ErrorCode::empty_intersection)
            std::cerr << "robust set is empty: consider non-injection remedial actions "
                         "(line tripping, impedance adjustment)\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
