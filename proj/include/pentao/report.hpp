#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pentao/metrics.hpp"
#include "pentao/penta_o.hpp"

namespace pentao {

inline constexpr int kReportFormatVersion = 1;

struct RunReport {
    std::string label;
    nlohmann::json config;
    int n = 0;
    bool has_fields = false;
    double e_min = 0.0;
    double e_max = 0.0;
    /// Set for field-free instances (MaxCut form).
    std::optional<RatioConvention> convention;

    Schedule schedule;
    std::vector<double> j_trajectory;       // drives the algorithm
    std::vector<double> j_exact;            // exact J of each prepared state
    std::vector<double> r_trajectory;       // field-free only
    std::vector<double> normalized_trajectory;
    std::vector<double> low_energy_trajectory;
    std::vector<std::uint64_t> trials_cumulative;
    std::vector<double> time_model_cumulative; // seconds, level-wise T_q model

    ConvergenceMetric convergence_metric = ConvergenceMetric::ApproximationRatio;
    ConvergencePoint convergence;
    std::optional<double> r_c;
    bool stopped_on_convergence = false;

    double low_energy_probability = 0.0;   // final state
    double ground_state_probability = 0.0; // final state, exact
    std::optional<double> final_ground_frequency; // from the final sampling run
    std::uint64_t probe_trials = 0;
    std::uint64_t total_trials = 0;
    double wall_clock_seconds = 0.0;

    std::vector<StepResult> steps;
};

RunReport build_report(const IsingInstance &inst, const Spectrum<double> &spec,
                       const PentaOResult &result, const PentaOConfig &cfg,
                       nlohmann::json config = nlohmann::json::object(),
                       double wall_clock_seconds = 0.0);

nlohmann::json to_json(const RunReport &report);
/// {level, probes: [[theta, J], ...], model, theta, J, trials_so_far}.
nlohmann::json step_record(const StepResult &step, std::uint64_t trials_so_far);

std::string to_string(ConvergenceMetric metric);
std::string to_string(RatioConvention conv);
std::string to_string(ProbeMode mode);

nlohmann::json config_to_json(const PentaOConfig &cfg);

/// Two comment lines (format version, resolved config) then
/// level,J,r,trials,cumulative_time_model.
void write_levels_csv(std::ostream &out, const RunReport &report);

} // namespace pentao
