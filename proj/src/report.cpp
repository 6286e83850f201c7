#include "pentao/report.hpp"

#include <ostream>

#include "pentao/io.hpp"

namespace pentao {

std::string to_string(ConvergenceMetric metric) {
    switch (metric) {
    case ConvergenceMetric::Auto:
        return "auto";
    case ConvergenceMetric::ApproximationRatio:
        return "ratio";
    case ConvergenceMetric::NormalizedEnergy:
        return "normalized_energy";
    }
    return "unknown";
}

std::string to_string(RatioConvention conv) {
    return conv == RatioConvention::SumWeights ? "sum_weights" : "sum_abs_weights";
}

std::string to_string(ProbeMode mode) { return mode == ProbeMode::Exact ? "exact" : "shots"; }

nlohmann::json config_to_json(const PentaOConfig &cfg) {
    return {{"gamma0", cfg.gamma0},
            {"gammas", cfg.gammas},
            {"p_max", cfg.p_max},
            {"mode", to_string(cfg.mode)},
            {"M", cfg.shots},
            {"seed", cfg.seed},
            {"converge", cfg.converge},
            {"epsilon", cfg.epsilon},
            {"metric", to_string(cfg.metric)},
            {"final_sample", cfg.final_sample}};
}

RunReport build_report(const IsingInstance &inst, const Spectrum<double> &spec,
                       const PentaOResult &result, const PentaOConfig &cfg,
                       nlohmann::json config, double wall_clock_seconds) {
    RunReport report;
    report.label = inst.label();
    report.config = std::move(config);
    report.n = inst.n();
    report.has_fields = inst.has_fields();
    report.e_min = spec.e_min;
    report.e_max = spec.e_max;
    report.schedule = result.schedule;
    report.j_trajectory = result.j_observed;
    report.j_exact = result.j_exact;
    report.low_energy_trajectory = result.low_energy_trajectory;
    report.steps = result.steps;
    report.probe_trials = result.probe_trials;
    report.total_trials = result.total_trials;
    report.stopped_on_convergence = result.converged;
    report.wall_clock_seconds = wall_clock_seconds;

    const bool degenerate = !(spec.e_max > spec.e_min);
    if (!report.has_fields) {
        const auto conv = default_convention(inst);
        if (total_weight(inst, conv) - spec.e_min > 0.0) {
            report.convention = conv;
            for (double j : result.j_observed) {
                report.r_trajectory.push_back(approx_ratio(inst, j, spec.e_min, conv));
            }
        }
    }
    if (!degenerate) {
        for (double j : result.j_observed) {
            report.normalized_trajectory.push_back(normalized_energy(spec, j));
        }
    }

    const TtsParams tts{.shots = static_cast<double>(cfg.shots)};
    std::uint64_t trials = 0;
    double time = 0.0;
    for (const auto &step : result.steps) {
        trials += step.probes.size();
        time += static_cast<double>(step.probes.size()) * step.level * tts.shots *
                level_time(inst.n(), tts);
        report.trials_cumulative.push_back(trials);
        report.time_model_cumulative.push_back(time);
    }

    ConvergenceMetric metric = cfg.metric;
    if (metric == ConvergenceMetric::Auto) {
        metric = report.has_fields ? ConvergenceMetric::NormalizedEnergy
                                   : ConvergenceMetric::ApproximationRatio;
    }
    if (metric == ConvergenceMetric::ApproximationRatio && report.r_trajectory.empty()) {
        metric = ConvergenceMetric::NormalizedEnergy;
    }
    report.convergence_metric = metric;
    if (metric == ConvergenceMetric::ApproximationRatio) {
        report.convergence = convergence_point(report.r_trajectory, cfg.epsilon);
        report.r_c = report.convergence.value;
    } else if (!report.normalized_trajectory.empty()) {
        report.convergence = convergence_point_energy(report.normalized_trajectory, cfg.epsilon);
        if (!report.r_trajectory.empty()) {
            report.r_c = report.r_trajectory[static_cast<std::size_t>(report.convergence.level - 1)];
        }
    }

    if (!degenerate) {
        report.low_energy_probability = low_energy_probability(result.final_state, spec);
    }
    report.ground_state_probability = ground_state_probability(result.final_state, spec);
    if (result.final_shots) {
        std::uint64_t hits = 0;
        for (const auto &[k, count] : result.final_shots->counts) {
            if (spec.energies[static_cast<Eigen::Index>(k)] == spec.e_min) {
                hits += count;
            }
        }
        report.final_ground_frequency =
            static_cast<double>(hits) / static_cast<double>(result.final_shots->shots);
    }
    return report;
}

nlohmann::json step_record(const StepResult &step, std::uint64_t trials_so_far) {
    nlohmann::json probes = nlohmann::json::array();
    for (const auto &p : step.probes) {
        probes.push_back({p.theta, p.j_value});
    }
    return {{"level", step.level},
            {"gamma", step.gamma},
            {"probes", probes},
            {"model",
             {{"A", step.model.A},
              {"phi", step.model.phi},
              {"A_prime", step.model.A_prime},
              {"phi_prime", step.model.phi_prime},
              {"C", step.model.C}}},
            {"theta", step.theta},
            {"J", step.j_predicted},
            {"degenerate", step.degenerate},
            {"trials_so_far", trials_so_far}};
}

nlohmann::json to_json(const RunReport &report) {
    nlohmann::json schedule = nlohmann::json::array();
    for (const auto &level : report.schedule.levels) {
        schedule.push_back({{"gamma", level.gamma}, {"theta", level.theta}});
    }
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t k = 0; k < report.steps.size(); ++k) {
        steps.push_back(step_record(report.steps[k], report.trials_cumulative[k]));
    }
    nlohmann::json j = {
        {"format_version", kReportFormatVersion},
        {"label", report.label},
        {"config", report.config},
        {"n", report.n},
        {"has_fields", report.has_fields},
        {"e_min", report.e_min},
        {"e_max", report.e_max},
        {"schedule", schedule},
        {"J", report.j_trajectory},
        {"J_exact", report.j_exact},
        {"r", report.r_trajectory},
        {"normalized_energy", report.normalized_trajectory},
        {"low_energy_trajectory", report.low_energy_trajectory},
        {"trials_cumulative", report.trials_cumulative},
        {"time_model_cumulative", report.time_model_cumulative},
        {"convergence",
         {{"metric", to_string(report.convergence_metric)},
          {"p_c", report.convergence.level},
          {"value", report.convergence.value},
          {"stopped", report.stopped_on_convergence}}},
        {"low_energy_probability", report.low_energy_probability},
        {"ground_state_probability", report.ground_state_probability},
        {"probe_trials", report.probe_trials},
        {"total_trials", report.total_trials},
        {"wall_clock_seconds", report.wall_clock_seconds},
        {"steps", steps},
    };
    j["ratio_convention"] = report.convention ? nlohmann::json(to_string(*report.convention))
                                              : nlohmann::json(nullptr);
    j["r_c"] = report.r_c ? nlohmann::json(*report.r_c) : nlohmann::json(nullptr);
    j["final_ground_frequency"] = report.final_ground_frequency
                                      ? nlohmann::json(*report.final_ground_frequency)
                                      : nlohmann::json(nullptr);
    return j;
}

void write_levels_csv(std::ostream &out, const RunReport &report) {
    out << "# pentao levels format " << kReportFormatVersion << '\n';
    out << "# config: " << report.config.dump() << '\n';
    out << "level,J,r,trials,cumulative_time_model\n";
    for (std::size_t k = 0; k < report.j_trajectory.size(); ++k) {
        out << (k + 1) << ',' << format_double(report.j_trajectory[k]) << ',';
        if (k < report.r_trajectory.size()) {
            out << format_double(report.r_trajectory[k]);
        }
        out << ',' << report.trials_cumulative[k] << ','
            << format_double(report.time_model_cumulative[k]) << '\n';
    }
}

} // namespace pentao
