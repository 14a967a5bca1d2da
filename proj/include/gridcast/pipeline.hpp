#ifndef GRIDCAST_PIPELINE_HPP_
#define GRIDCAST_PIPELINE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridcast/io.hpp"
#include "gridcast/markov.hpp"
#include "gridcast/outage.hpp"
#include "gridcast/protect.hpp"

namespace gridcast {

/// One prediction/protection run: case reference, initial contingencies and
/// every tunable, with the standard defaults baked in.
struct Scenario {
    std::string case_path;
    CaseFormat format = CaseFormat::native_json;
    std::vector<std::pair<std::vector<int>, double>> initial_contingencies;
    int horizon = 3;
    int protect_at_step = 3;
    double epsilon = 0.1;
    OutageParams outage;
    double threshold_multiplier = 2.0;
    double threshold_floor = 0.1;
    int beam_width = 8;
    int dykstra_n = 50;
    double feasibility_tol = 1e-6;
    std::uint64_t seed = 0;

    void validate() const;

    /// Parses a scenario JSON document; relative case paths resolve against
    /// the scenario file's directory.
    static Scenario from_file(const std::string& path);
    static Scenario from_json(const nlohmann::json& doc, const std::string& base_dir = "");
};

struct RunReport {
    int bus_count = 0;
    int branch_count = 0;
    std::vector<CascadePath> paths;
    std::vector<SparseDistribution> trajectory;  // steps 0..h
    double bound = 0.0;                          // at protect_at_step
    Eigen::VectorXd delta_pb;                    // empty for predict-only runs
    bool protected_run = false;
    DykstraSolveResult solver;
    std::vector<std::string> warnings;
    std::map<std::string, double> timings_seconds;

    nlohmann::json to_json(bool include_timings) const;
};

SparseDistribution initial_distribution(const GridCase& grid, const Scenario& scenario);

RunReport run_predict(const Scenario& scenario);
RunReport run_protect(const Scenario& scenario);

/// Writes report.json plus delta_p.csv and paths.csv under out_dir.
void write_report(const RunReport& report, const std::string& out_dir, bool include_timings);

struct FlowRow {
    int branch = 0;
    int from = 0;
    int to = 0;
    double flow = 0.0;
    double threshold = 0.0;
    double ratio = 0.0;
    bool overloaded = false;  // ratio at or past the p_over ramp start
};

std::vector<FlowRow> run_flow(const std::string& case_path, CaseFormat format,
                              const std::vector<int>& outaged_branches,
                              const Eigen::VectorXd* injections_override = nullptr);

struct ValidationReport {
    bool ok = false;
    std::vector<std::string> messages;
};

ValidationReport run_validate(const std::string& case_path, CaseFormat format);

}  // namespace gridcast

#endif
