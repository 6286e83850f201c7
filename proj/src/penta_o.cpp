#include "pentao/penta_o.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pentao/metrics.hpp"

namespace pentao {

double PentaOConfig::gamma_for_level(int level) const {
    if (gammas.empty()) {
        return gamma0;
    }
    if (level < 1 || static_cast<std::size_t>(level) > gammas.size()) {
        throw InputError("PentaOConfig: no cost angle for level " + std::to_string(level));
    }
    return gammas[static_cast<std::size_t>(level - 1)];
}

void PentaOConfig::validate() const {
    if (!std::isfinite(gamma0)) {
        throw InputError("PentaOConfig: gamma0 must be finite");
    }
    if (p_max < 1) {
        throw InputError("PentaOConfig: p_max must be >= 1");
    }
    if (!gammas.empty() && gammas.size() < static_cast<std::size_t>(p_max)) {
        throw InputError("PentaOConfig: per-level gamma list shorter than p_max");
    }
    for (double g : gammas) {
        if (!std::isfinite(g)) {
            throw InputError("PentaOConfig: per-level gammas must be finite");
        }
    }
    if ((mode == ProbeMode::Shots || final_sample) && shots < 1) {
        throw InputError("PentaOConfig: shots must be >= 1");
    }
    if (!(epsilon > 0.0)) {
        throw InputError("PentaOConfig: epsilon must be positive");
    }
}

Seed probe_seed(Seed base, int level, int probe) {
    return derive_seed(derive_seed(base, static_cast<std::uint64_t>(level)),
                       static_cast<std::uint64_t>(probe));
}

StepResult penta_o_step(const Spectrum<double> &spec, const StateVector &prior_state,
                        bool has_fields, int level, const PentaOConfig &cfg,
                        std::uint64_t *evaluations) {
    StepResult step;
    step.level = level;
    step.gamma = cfg.gamma_for_level(level);
    const StateVector after_cost = apply_cost(prior_state, spec, step.gamma);

    const auto angles = probe_angles(has_fields);
    for (std::size_t k = 0; k < angles.size(); ++k) {
        ProbeRecord probe;
        probe.theta = angles[k];
        probe.mode = cfg.mode;
        const StateVector trial = apply_mixer(after_cost, probe.theta);
        if (cfg.mode == ProbeMode::Exact) {
            probe.j_value = expectation(trial, spec);
        } else {
            probe.shots = cfg.shots;
            probe.seed = probe_seed(cfg.seed, level, static_cast<int>(k));
            probe.j_value = estimate_energy(sample(trial, cfg.shots, probe.seed), spec);
        }
        if (evaluations) {
            ++*evaluations;
        }
        step.probes.push_back(probe);
    }

    step.model = fit_trig(step.probes, has_fields);
    const auto [lo, hi] = std::minmax_element(
        step.probes.begin(), step.probes.end(),
        [](const ProbeRecord &a, const ProbeRecord &b) { return a.j_value < b.j_value; });
    if (hi->j_value - lo->j_value <= kDegenerateProbeSpread) {
        // Flat curve: keep the previous level's objective.
        step.degenerate = true;
        step.theta = 0.0;
        step.j_predicted = model_eval(step.model, 0.0);
        return step;
    }
    const auto minimum = argmin_model(step.model);
    step.theta = minimum.theta;
    step.j_predicted = minimum.value;
    return step;
}

StepResult penta_o_step(const IsingInstance &inst, const Schedule &prior,
                        const PentaOConfig &cfg) {
    cfg.validate();
    const auto spec = diagonal<double>(inst, cfg.qubit_cap);
    const auto state = run_qaoa(spec, prior);
    return penta_o_step(spec, state, inst.has_fields(), static_cast<int>(prior.depth()) + 1, cfg);
}

namespace {

ConvergenceMetric resolve_metric(ConvergenceMetric metric, const IsingInstance &inst) {
    if (metric != ConvergenceMetric::Auto) {
        return metric;
    }
    return inst.has_fields() ? ConvergenceMetric::NormalizedEnergy
                             : ConvergenceMetric::ApproximationRatio;
}

} // namespace

PentaOResult penta_o_run(const IsingInstance &inst, const PentaOConfig &cfg) {
    cfg.validate();
    return penta_o_run(inst, diagonal<double>(inst, cfg.qubit_cap), cfg);
}

PentaOResult penta_o_run(const IsingInstance &inst, const Spectrum<double> &spec,
                         const PentaOConfig &cfg) {
    cfg.validate();
    if (spec.n != inst.n()) {
        throw InputError("penta_o_run: spectrum does not match instance");
    }
    const bool has_fields = inst.has_fields();
    const auto metric = resolve_metric(cfg.metric, inst);
    const bool spectrum_degenerate = !(spec.e_max > spec.e_min);
    if (cfg.converge && spectrum_degenerate) {
        throw InputError("penta_o_run: convergence needs a non-degenerate spectrum");
    }
    const auto conv = default_convention(inst);

    auto progress = [&](double j) {
        if (metric == ConvergenceMetric::ApproximationRatio) {
            return approx_ratio(inst, j, spec.e_min, conv);
        }
        return normalized_energy(spec, j);
    };

    PentaOResult result;
    StateVector state = init_plus<double>(inst.n(), cfg.qubit_cap);
    for (int level = 1; level <= cfg.p_max; ++level) {
        auto step = penta_o_step(spec, state, has_fields, level, cfg, &result.probe_trials);
        apply_cost_inplace(state, spec, step.gamma);
        apply_mixer_inplace(state, step.theta);

        const double j_exact = expectation(state, spec);
        const double j_observed = cfg.mode == ProbeMode::Exact ? j_exact : step.j_predicted;
        result.schedule.levels.push_back({step.gamma, step.theta});
        result.schedule.objective_trajectory.push_back(j_observed);
        result.j_exact.push_back(j_exact);
        result.j_observed.push_back(j_observed);
        result.low_energy_trajectory.push_back(
            spectrum_degenerate ? 1.0 : low_energy_probability(state, spec));
        result.steps.push_back(std::move(step));

        if (cfg.converge && result.j_observed.size() >= 2) {
            const double before = progress(result.j_observed[result.j_observed.size() - 2]);
            const double after = progress(j_observed);
            const bool stalled = metric == ConvergenceMetric::ApproximationRatio
                                     ? after - before < cfg.epsilon
                                     : before - after < cfg.epsilon * before;
            if (stalled) {
                result.converged = true;
                break;
            }
        }
    }
    result.total_trials = result.probe_trials;
    if (cfg.final_sample) {
        result.final_shots = sample(state, cfg.shots, probe_seed(cfg.seed, 0, 0));
        ++result.total_trials;
    }
    result.final_state = std::move(state);
    return result;
}

TrigModel coefficients_from_observables(const IsingInstance &inst, const Schedule &prior,
                                        double gamma) {
    const auto spec = diagonal<double>(inst);
    auto state = run_qaoa(spec, prior);
    apply_cost_inplace(state, spec, gamma);
    return model_from_observables(pauli_expectations(state, inst));
}

} // namespace pentao
