#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pentao/ising.hpp"
#include "pentao/simulator.hpp"
#include "pentao/trig_model.hpp"

namespace pentao {

/// Quantity watched by the optional convergence stop.
enum class ConvergenceMetric {
    /// Approximation ratio for field-free instances, normalized energy otherwise.
    Auto,
    /// Stop when r_{l+1} - r_l < epsilon.
    ApproximationRatio,
    /// Stop when e_l - e_{l+1} < epsilon * e_l, e being the min-max
    /// normalized energy (the remaining gap to the ground state).
    NormalizedEnergy,
};

inline constexpr double kDefaultConvergenceEpsilon = 5.0 / 1000.0;

struct PentaOConfig {
    /// Cost angle used at every level.
    double gamma0 = 0.2;
    /// Optional per-level cost angles; when non-empty, level l uses
    /// gammas[l-1] and the list must cover p_max levels.
    std::vector<double> gammas;
    int p_max = 10;
    ProbeMode mode = ProbeMode::Exact;
    /// Shots per trial in shots mode, and for the final sampling run.
    std::uint64_t shots = 3000;
    Seed seed = 0;
    bool converge = false;
    double epsilon = kDefaultConvergenceEpsilon;
    ConvergenceMetric metric = ConvergenceMetric::Auto;
    /// Sample the final state once more (the "+1" trial).
    bool final_sample = true;
    int qubit_cap = kDefaultQubitCap;

    double gamma_for_level(int level) const;
    void validate() const;
};

/// Probe values closer than this are treated as a flat curve (theta* = 0).
inline constexpr double kDegenerateProbeSpread = 1e-12;

struct StepResult {
    int level = 0;
    double gamma = 0.0;
    double theta = 0.0;
    /// model_eval(model, theta).
    double j_predicted = 0.0;
    TrigModel model;
    std::vector<ProbeRecord> probes;
    bool degenerate = false;
};

/// Seed of probe `probe` at level `level` (level 0 is the final sampling run).
Seed probe_seed(Seed base, int level, int probe);

/// One level: apply U_C(gamma) to the prior state, evaluate J at each probe
/// angle, fit the model, pick its minimizer. `evaluations` is incremented
/// once per J evaluation.
StepResult penta_o_step(const Spectrum<double> &spec, const StateVector &prior_state,
                        bool has_fields, int level, const PentaOConfig &cfg,
                        std::uint64_t *evaluations = nullptr);

/// Same, preparing the prior state from `prior` on `inst`.
StepResult penta_o_step(const IsingInstance &inst, const Schedule &prior,
                        const PentaOConfig &cfg);

struct PentaOResult {
    Schedule schedule;
    std::vector<StepResult> steps;
    /// Exact J of the state after each level (simulation side-information,
    /// also available in shots mode).
    std::vector<double> j_exact;
    /// J that drives the algorithm: exact in exact mode, the model
    /// prediction from estimated probes in shots mode.
    std::vector<double> j_observed;
    /// Low-energy probability (normalized energy < 0.1) after each level.
    std::vector<double> low_energy_trajectory;
    std::uint64_t probe_trials = 0;
    std::uint64_t total_trials = 0;
    bool converged = false;
    StateVector final_state;
    std::optional<ShotSet> final_shots;
};

PentaOResult penta_o_run(const IsingInstance &inst, const PentaOConfig &cfg);
PentaOResult penta_o_run(const IsingInstance &inst, const Spectrum<double> &spec,
                         const PentaOConfig &cfg);

/// Coefficients from the weighted Z/Y observables on U_C(gamma)|psi_prior>.
TrigModel coefficients_from_observables(const IsingInstance &inst, const Schedule &prior,
                                        double gamma);

} // namespace pentao
