#include "pentao/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pentao {

RatioConvention default_convention(const IsingInstance &inst) {
    return inst.has_negative_coupling() ? RatioConvention::SumAbsWeights
                                        : RatioConvention::SumWeights;
}

double total_weight(const IsingInstance &inst, RatioConvention conv) {
    if (conv == RatioConvention::SumWeights && inst.has_negative_coupling()) {
        throw InputError("total_weight: negative couplings require the sum of |w_ij|");
    }
    double w = 0.0;
    for (const auto &c : inst.couplings()) {
        w += conv == RatioConvention::SumAbsWeights ? std::abs(c.w) : c.w;
    }
    return w;
}

double approx_ratio(const IsingInstance &inst, double j, double e_min, RatioConvention conv) {
    const double w = total_weight(inst, conv);
    const double denominator = w - e_min;
    if (!(denominator > 0.0)) {
        throw InputError("approx_ratio: W - J_min must be positive");
    }
    return (w - j) / denominator;
}

ConvergencePoint convergence_point(std::span<const double> ratio_trajectory, double eps) {
    if (ratio_trajectory.empty()) {
        throw InputError("convergence_point: empty trajectory");
    }
    if (!(eps > 0.0)) {
        throw InputError("convergence_point: eps must be positive");
    }
    for (std::size_t l = 0; l + 1 < ratio_trajectory.size(); ++l) {
        if (ratio_trajectory[l + 1] - ratio_trajectory[l] < eps) {
            return {static_cast<int>(l + 1), ratio_trajectory[l]};
        }
    }
    return {static_cast<int>(ratio_trajectory.size()), ratio_trajectory.back()};
}

ConvergencePoint convergence_point_energy(std::span<const double> normalized_trajectory,
                                          double eps) {
    if (normalized_trajectory.empty()) {
        throw InputError("convergence_point_energy: empty trajectory");
    }
    if (!(eps > 0.0)) {
        throw InputError("convergence_point_energy: eps must be positive");
    }
    for (std::size_t l = 0; l + 1 < normalized_trajectory.size(); ++l) {
        const double e = normalized_trajectory[l];
        if (e - normalized_trajectory[l + 1] < eps * e) {
            return {static_cast<int>(l + 1), e};
        }
    }
    return {static_cast<int>(normalized_trajectory.size()), normalized_trajectory.back()};
}

double level_time(int n, const TtsParams &params) { return n * params.tau; }

double scaling_alpha(const TtsParams &params) {
    const double n = params.calibration_n;
    const double p = params.calibration_p;
    switch (params.scaling) {
    case PScaling::Quadratic:
        return p / (n * n);
    case PScaling::Linear:
        return p / n;
    case PScaling::Log:
        return p / std::log(n);
    }
    return 0.0;
}

double tts_quantum(int p, int n, const TtsParams &params) {
    if (p < 1 || n < 1) {
        throw InputError("tts_quantum: p and N must be >= 1");
    }
    const double pp = p;
    return (5.0 * pp * (pp + 1.0) / 2.0 + pp) * params.shots * level_time(n, params);
}

double tts_classical(int n) {
    if (n < 1) {
        throw InputError("tts_classical: N must be >= 1");
    }
    return 1e-5 * std::exp(0.04029 * n);
}

int p_scaling(int n, const TtsParams &params) {
    if (n < 1) {
        throw InputError("p_scaling: N must be >= 1");
    }
    const double alpha = scaling_alpha(params);
    double x = 0.0;
    switch (params.scaling) {
    case PScaling::Quadratic:
        x = alpha * n * static_cast<double>(n);
        break;
    case PScaling::Linear:
        x = alpha * n;
        break;
    case PScaling::Log:
        x = alpha * std::log(static_cast<double>(n));
        break;
    }
    // Relative slack so exact products like alpha(20) * 20 = 30 do not round up.
    const int p = static_cast<int>(std::ceil(x * (1.0 - 1e-12)));
    return std::max(p, 1);
}

std::optional<int> crossover(const TtsParams &params, int first, int last, int step) {
    if (first < 1 || last < first || step < 1) {
        throw InputError("crossover: need 1 <= first <= last and step >= 1");
    }
    for (int n = first; n <= last; n += step) {
        if (tts_quantum(p_scaling(n, params), n, params) < tts_classical(n)) {
            return n;
        }
    }
    return std::nullopt;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw InputError("quantile: empty sample");
    }
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

BoxStats box_stats(std::vector<double> values) {
    if (values.empty()) {
        throw InputError("box_stats: empty sample");
    }
    std::sort(values.begin(), values.end());
    BoxStats out;
    out.count = values.size();
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    out.median = quantile(values, 0.5);
    out.q1 = quantile(values, 0.25);
    out.q3 = quantile(values, 0.75);
    out.min = values.front();
    out.max = values.back();
    const double iqr = out.q3 - out.q1;
    const double lo_fence = out.q1 - 1.5 * iqr;
    const double hi_fence = out.q3 + 1.5 * iqr;
    out.whisker_low = *std::find_if(values.begin(), values.end(),
                                    [&](double v) { return v >= lo_fence; });
    out.whisker_high = *std::find_if(values.rbegin(), values.rend(),
                                     [&](double v) { return v <= hi_fence; });
    return out;
}

} // namespace pentao
