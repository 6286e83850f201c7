#include "pentao/trig_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

namespace pentao {

namespace {

constexpr double kPi = std::numbers::pi;

/// atan2 folded into (-pi, pi].
double canonical_phase(double y, double x) {
    if (x == 0.0 && y == 0.0) {
        return 0.0;
    }
    const double phase = std::atan2(y, x);
    return phase <= -kPi ? kPi : phase;
}

double wrap(double theta, double period) {
    double t = std::fmod(theta, period);
    if (t < 0.0) {
        t += period;
    }
    return t >= period ? 0.0 : t;
}

std::string describe_probes(std::span<const ProbeRecord> probes) {
    std::ostringstream out;
    out << "{";
    for (std::size_t k = 0; k < probes.size(); ++k) {
        out << (k ? ", " : "") << probes[k].theta;
    }
    out << "}";
    return out.str();
}

} // namespace

TrigModel from_linear_coefficients(double s4, double c4, double s2, double c2, double c) {
    // A sin(4t + phi) = A cos(phi) sin 4t + A sin(phi) cos 4t.
    TrigModel m;
    m.A = std::hypot(s4, c4);
    m.phi = canonical_phase(c4, s4);
    m.A_prime = std::hypot(s2, c2);
    m.phi_prime = canonical_phase(c2, s2);
    m.C = c;
    return m;
}

TrigModel model_from_observables(const ObservableSet &obs) {
    // c2^2 = (1 + cos 4t)/2, s2^2 = (1 - cos 4t)/2, c2 s2 = sin(4t)/2.
    return from_linear_coefficients(obs.zy / 2.0, (obs.zz - obs.yy) / 2.0, obs.y, obs.z,
                                    (obs.zz + obs.yy) / 2.0);
}

double model_eval(const TrigModel &m, double theta) {
    return m.A * std::sin(4.0 * theta + m.phi) + m.A_prime * std::sin(2.0 * theta + m.phi_prime) +
           m.C;
}

double model_derivative(const TrigModel &m, double theta) {
    return 4.0 * m.A * std::cos(4.0 * theta + m.phi) +
           2.0 * m.A_prime * std::cos(2.0 * theta + m.phi_prime);
}

namespace {
double model_second_derivative(const TrigModel &m, double theta) {
    return -16.0 * m.A * std::sin(4.0 * theta + m.phi) -
           4.0 * m.A_prime * std::sin(2.0 * theta + m.phi_prime);
}

/// Safeguarded Newton on J' inside [center - step, center + step].
double refine_minimum(const TrigModel &m, double center, double step) {
    double lo = center - step;
    double hi = center + step;
    if (model_derivative(m, lo) > 0.0 || model_derivative(m, hi) < 0.0) {
        return center;
    }
    double theta = center;
    for (int iter = 0; iter < 100; ++iter) {
        const double d = model_derivative(m, theta);
        if (std::abs(d) <= 1e-12) {
            break;
        }
        if (d < 0.0) {
            lo = theta;
        } else {
            hi = theta;
        }
        const double dd = model_second_derivative(m, theta);
        double next = (dd > 0.0) ? theta - d / dd : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == theta) {
            break;
        }
        theta = next;
    }
    return theta;
}
} // namespace

std::vector<double> probe_angles(bool has_fields) {
    std::vector<double> out;
    if (has_fields) {
        for (int k = 1; k <= 5; ++k) {
            out.push_back(k * kPi / 6.0);
        }
    } else {
        for (int k = 1; k <= 3; ++k) {
            out.push_back(k * kPi / 8.0);
        }
    }
    return out;
}

TrigModel fit_trig(std::span<const ProbeRecord> probes, bool has_fields) {
    const Eigen::Index size = has_fields ? 5 : 3;
    if (static_cast<Eigen::Index>(probes.size()) != size) {
        std::ostringstream msg;
        msg << "fit_trig: expected " << size << " probes, got " << probes.size();
        throw InputError(msg.str());
    }
    Eigen::MatrixXd basis(size, size);
    Eigen::VectorXd values(size);
    for (Eigen::Index r = 0; r < size; ++r) {
        const double t = probes[static_cast<std::size_t>(r)].theta;
        if (has_fields) {
            basis.row(r) << std::sin(4 * t), std::cos(4 * t), std::sin(2 * t), std::cos(2 * t), 1.0;
        } else {
            basis.row(r) << std::sin(4 * t), std::cos(4 * t), 1.0;
        }
        values[r] = probes[static_cast<std::size_t>(r)].j_value;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    const double smallest = sv[size - 1];
    if (!(smallest > 0.0) || sv[0] / smallest > kMaxProbeConditionNumber) {
        throw NumericalError("fit_trig: probe system is singular or ill-conditioned for angles " +
                             describe_probes(probes));
    }
    const Eigen::VectorXd x = svd.solve(values);
    if (has_fields) {
        return from_linear_coefficients(x[0], x[1], x[2], x[3], x[4]);
    }
    return from_linear_coefficients(x[0], x[1], 0.0, 0.0, x[2]);
}

ModelMinimum argmin_model(const TrigModel &m, int scan_points) {
    if (m.A == 0.0 && m.A_prime == 0.0) {
        return {0.0, m.C};
    }
    if (m.A_prime == 0.0) {
        // sin(4t + phi) = -1 at 4t + phi = 3pi/2; period pi/2.
        const double theta = wrap((1.5 * kPi - m.phi) / 4.0, kPi / 2.0);
        return {theta, model_eval(m, theta)};
    }
    if (scan_points < 3) {
        throw InputError("argmin_model: need at least 3 scan points");
    }
    const double step = kPi / scan_points;
    std::vector<double> grid(static_cast<std::size_t>(scan_points));
    for (int k = 0; k < scan_points; ++k) {
        grid[static_cast<std::size_t>(k)] = model_eval(m, k * step);
    }
    // Polish every discrete local minimum of the periodic scan; there are at
    // most four, so near-tied basins are all resolved exactly.
    ModelMinimum best{0.0, std::numeric_limits<double>::infinity()};
    for (int k = 0; k < scan_points; ++k) {
        const double prev = grid[static_cast<std::size_t>((k + scan_points - 1) % scan_points)];
        const double next = grid[static_cast<std::size_t>((k + 1) % scan_points)];
        const double here = grid[static_cast<std::size_t>(k)];
        if (!(here <= prev && here < next)) {
            continue;
        }
        const double theta = wrap(refine_minimum(m, k * step, step), kPi);
        double value = model_eval(m, theta);
        double chosen = theta;
        if (value > here) {
            chosen = k * step;
            value = here;
        }
        if (value < best.value || (value == best.value && chosen < best.theta)) {
            best = {chosen, value};
        }
    }
    if (!std::isfinite(best.value)) {
        // Flat scan: every point ties.
        return {0.0, grid[0]};
    }
    return best;
}

} // namespace pentao
