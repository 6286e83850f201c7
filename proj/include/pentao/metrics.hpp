#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pentao/ising.hpp"
#include "pentao/simulator.hpp"

namespace pentao {

// Reference ratios for MaxCut.
inline constexpr double kRatioNpHardGeneric = 16.0 / 17.0;  // r_g*
inline constexpr double kRatioGoemansWilliamson = 0.8786;   // r_g
inline constexpr double kRatioCubicClassical = 0.9326;      // r_u3r
inline constexpr double kRatioNpHardCubic = 331.0 / 332.0;  // r_u3r*

inline constexpr double kLowEnergyThreshold = 0.1;

/// How W in r = (W - J) / (W - J_min) is formed.
enum class RatioConvention { SumWeights, SumAbsWeights };

/// SumAbsWeights when any coupling is negative, SumWeights otherwise.
RatioConvention default_convention(const IsingInstance &inst);
double total_weight(const IsingInstance &inst, RatioConvention conv);

double approx_ratio(const IsingInstance &inst, double j, double e_min, RatioConvention conv);

struct ConvergencePoint {
    int level = 0; // 1-based
    double value = 0.0;
};

/// Smallest l with r_{l+1} - r_l < eps; the last level if none.
ConvergencePoint convergence_point(std::span<const double> ratio_trajectory, double eps);

/// Smallest l with e_l - e_{l+1} < eps * e_l for normalized energies e.
ConvergencePoint convergence_point_energy(std::span<const double> normalized_trajectory,
                                          double eps);

template <typename Scalar>
double low_energy_probability(const StateVectorX<Scalar> &psi, const Spectrum<Scalar> &spec,
                              double threshold = kLowEnergyThreshold) {
    if (psi.size() != spec.energies.size()) {
        throw InputError("low_energy_probability: dimension mismatch");
    }
    double total = 0.0;
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        if (static_cast<double>(normalized_energy(spec, spec.energies[k])) < threshold) {
            total += static_cast<double>(std::norm(psi[k]));
        }
    }
    return total;
}

template <typename Scalar>
double ground_state_probability(const StateVectorX<Scalar> &psi, const Spectrum<Scalar> &spec) {
    if (psi.size() != spec.energies.size()) {
        throw InputError("ground_state_probability: dimension mismatch");
    }
    double total = 0.0;
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        if (spec.energies[k] == spec.e_min) {
            total += static_cast<double>(std::norm(psi[k]));
        }
    }
    return total;
}

// Time-to-solution model ------------------------------------------------------

enum class PScaling { Quadratic, Linear, Log };

struct TtsParams {
    /// Two-qubit gate time in seconds; a single level on N qubits takes N tau.
    double tau = 500e-9;
    /// Repetitions per trial.
    double shots = 1e3;
    PScaling scaling = PScaling::Log;
    /// p(calibration_n) = calibration_p fixes the scaling constant.
    int calibration_n = 20;
    int calibration_p = 30;
};

double level_time(int n, const TtsParams &params);
double scaling_alpha(const TtsParams &params);

/// [5p(p+1)/2 + p] M t0.
double tts_quantum(int p, int n, const TtsParams &params = {});
/// 1e-5 exp(0.04029 N) seconds.
double tts_classical(int n);
/// ceil(alpha f(N)), at least 1.
int p_scaling(int n, const TtsParams &params = {});

/// Smallest N in first, first+step, ..., <= last with T_q < T_c.
std::optional<int> crossover(const TtsParams &params, int first, int last, int step = 1);

// Box-plot statistics ---------------------------------------------------------

struct BoxStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    /// Most extreme samples within 1.5 IQR of the box.
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);
BoxStats box_stats(std::vector<double> values);

} // namespace pentao
