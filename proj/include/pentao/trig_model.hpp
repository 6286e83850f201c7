#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pentao/simulator.hpp"

namespace pentao {

/// J(theta) = A sin(4 theta + phi) + A' sin(2 theta + phi') + C.
///
/// Canonical form: A, A' >= 0, phases in (-pi, pi], a phase is 0 whenever
/// its amplitude is 0. Period pi, and pi/2 when A' == 0.
struct TrigModel {
    double A = 0.0;
    double phi = 0.0;
    double A_prime = 0.0;
    double phi_prime = 0.0;
    double C = 0.0;
};

/// Build the canonical model from the linear-basis coefficients
///   s4 sin 4t + c4 cos 4t + s2 sin 2t + c2 cos 2t + c.
TrigModel from_linear_coefficients(double s4, double c4, double s2, double c2, double c);

/// Model from the weighted observables measured on U_C(gamma)|psi_{p-1}>.
TrigModel model_from_observables(const ObservableSet &obs);

double model_eval(const TrigModel &m, double theta);
/// dJ/dtheta.
double model_derivative(const TrigModel &m, double theta);

enum class ProbeMode { Exact, Shots };

struct ProbeRecord {
    double theta = 0.0;
    double j_value = 0.0;
    ProbeMode mode = ProbeMode::Exact;
    std::uint64_t shots = 0; // shots mode only
    Seed seed = 0;           // shots mode only
};

/// k pi / 6 for k = 1..5 with fields, k pi / 8 for k = 1..3 without.
std::vector<double> probe_angles(bool has_fields);

/// Above this the probe system is rejected as ill-conditioned.
inline constexpr double kMaxProbeConditionNumber = 1e8;

/// Exact solve of the 5x5 (fields) or 3x3 (field-free) probe system.
TrigModel fit_trig(std::span<const ProbeRecord> probes, bool has_fields);

struct ModelMinimum {
    double theta = 0.0;
    double value = 0.0;
};

inline constexpr int kDefaultArgminScanPoints = 4096;

/// Global minimizer over [0, pi); ties go to the smallest angle.
ModelMinimum argmin_model(const TrigModel &m, int scan_points = kDefaultArgminScanPoints);

} // namespace pentao
