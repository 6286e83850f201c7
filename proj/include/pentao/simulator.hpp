#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "pentao/errors.hpp"
#include "pentao/ising.hpp"
#include "pentao/rng.hpp"

namespace pentao {

/// 2^n amplitudes; index bit i is qubit i (same convention as SpinConfig).
template <typename Scalar>
using StateVectorX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
using StateVector = StateVectorX<double>;

/// Parameters of one level. `gamma` multiplies H_C, `theta` the mixer.
struct LevelParams {
    double gamma = 0.0;
    double theta = 0.0;

    friend bool operator==(const LevelParams &, const LevelParams &) = default;
};

struct Schedule {
    std::vector<LevelParams> levels;
    /// J after each level, when known.
    std::vector<double> objective_trajectory;

    std::size_t depth() const noexcept { return levels.size(); }
};

/// Measurement record: basis index -> count.
struct ShotSet {
    int n = 0;
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t shots = 0;
};

template <typename Derived> int qubit_count(const Eigen::MatrixBase<Derived> &psi) {
    const auto size = static_cast<std::uint64_t>(psi.size());
    if (size == 0 || !std::has_single_bit(size)) {
        throw InputError("state vector size is not a power of two");
    }
    return std::countr_zero(size);
}

template <typename Scalar = double>
StateVectorX<Scalar> init_plus(int n, int cap = kDefaultQubitCap) {
    if (n < 1) {
        throw InputError("init_plus: n must be >= 1");
    }
    detail::check_qubit_cap(n, cap);
    const auto dim = Eigen::Index{1} << n;
    const Scalar amp = std::pow(Scalar(2), Scalar(-n) / Scalar(2));
    return StateVectorX<Scalar>::Constant(dim, std::complex<Scalar>(amp, 0));
}

namespace detail {
template <typename Scalar>
void check_dims(const StateVectorX<Scalar> &psi, const Spectrum<Scalar> &spec) {
    if (psi.size() != spec.energies.size()) {
        throw InputError("state vector and spectrum dimensions differ");
    }
}
} // namespace detail

/// In place: amplitude k picks up exp(-i gamma E_k).
template <typename Scalar>
void apply_cost_inplace(StateVectorX<Scalar> &psi, const Spectrum<Scalar> &spec, Scalar gamma) {
    detail::check_dims(psi, spec);
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        const Scalar angle = -gamma * spec.energies[k];
        psi[k] *= std::complex<Scalar>(std::cos(angle), std::sin(angle));
    }
}

template <typename Scalar>
StateVectorX<Scalar> apply_cost(StateVectorX<Scalar> psi, const Spectrum<Scalar> &spec,
                                Scalar gamma) {
    apply_cost_inplace(psi, spec, gamma);
    return psi;
}

template <typename Scalar>
StateVectorX<Scalar> apply_cost(StateVectorX<Scalar> psi, const IsingInstance &inst,
                                Scalar gamma) {
    if (qubit_count(psi) != inst.n()) {
        throw InputError("apply_cost: qubit count mismatch");
    }
    apply_cost_inplace(psi, diagonal<Scalar>(inst), gamma);
    return psi;
}

/// In place: exp(-i theta X) on every qubit, i.e. exp(-i theta sum_i X_i).
/// With this sign, U^dag Z_i U = cos(2 theta) Z_i + sin(2 theta) Y_i.
template <typename Scalar>
void apply_mixer_inplace(StateVectorX<Scalar> &psi, Scalar theta) {
    const int n = qubit_count(psi);
    const Scalar c = std::cos(theta);
    const std::complex<Scalar> s(0, -std::sin(theta));
    const Eigen::Index dim = psi.size();
    for (int q = 0; q < n; ++q) {
        const Eigen::Index stride = Eigen::Index{1} << q;
        for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
            for (Eigen::Index k = base; k < base + stride; ++k) {
                const auto a0 = psi[k];
                const auto a1 = psi[k + stride];
                psi[k] = c * a0 + s * a1;
                psi[k + stride] = s * a0 + c * a1;
            }
        }
    }
}

template <typename Scalar>
StateVectorX<Scalar> apply_mixer(StateVectorX<Scalar> psi, Scalar theta) {
    apply_mixer_inplace(psi, theta);
    return psi;
}

template <typename Scalar>
StateVectorX<Scalar> run_qaoa(const Spectrum<Scalar> &spec, const Schedule &sched) {
    auto psi = init_plus<Scalar>(spec.n, spec.n);
    for (const auto &level : sched.levels) {
        apply_cost_inplace(psi, spec, static_cast<Scalar>(level.gamma));
        apply_mixer_inplace(psi, static_cast<Scalar>(level.theta));
    }
    return psi;
}

inline StateVector run_qaoa(const IsingInstance &inst, const Schedule &sched) {
    return run_qaoa(diagonal<double>(inst), sched);
}

template <typename Scalar>
Scalar expectation(const StateVectorX<Scalar> &psi, const Spectrum<Scalar> &spec) {
    detail::check_dims(psi, spec);
    return psi.cwiseAbs2().dot(spec.energies);
}

inline double expectation(const StateVector &psi, const IsingInstance &inst) {
    if (qubit_count(psi) != inst.n()) {
        throw InputError("expectation: qubit count mismatch");
    }
    return expectation(psi, diagonal<double>(inst));
}

/// Weighted Pauli expectations entering the trigonometric coefficients:
///   zz = sum_E w_ij <Z_i Z_j>,  yy = sum_E w_ij <Y_i Y_j>,
///   zy = sum_E w_ij <Z_i Y_j + Y_i Z_j>,
///   z  = sum_i w_ii <Z_i>,       y  = sum_i w_ii <Y_i>.
struct ObservableSet {
    double zz = 0.0;
    double yy = 0.0;
    double zy = 0.0;
    double z = 0.0;
    double y = 0.0;
};

namespace detail {

/// <psi| P |psi> for a Pauli string made of Z on `z_mask` and Y on `y_mask`
/// (disjoint masks). Y|0> = i|1>, Y|1> = -i|0>.
template <typename Scalar>
Scalar pauli_zy_expectation(const StateVectorX<Scalar> &psi, std::uint64_t z_mask,
                            std::uint64_t y_mask) {
    using C = std::complex<Scalar>;
    const int y_count = std::popcount(y_mask);
    // i^{#Y} from the Y factors before signs from the bits.
    static constexpr int kRe[4] = {1, 0, -1, 0};
    static constexpr int kIm[4] = {0, 1, 0, -1};
    const C base_phase(Scalar(kRe[y_count % 4]), Scalar(kIm[y_count % 4]));
    C acc(0, 0);
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        const auto uk = static_cast<std::uint64_t>(k);
        // Z gives (-1)^bit; Y on a set bit gives the extra -1 of -i.
        const int sign_bits = std::popcount(uk & (z_mask | y_mask));
        const Scalar sign = (sign_bits & 1) ? Scalar(-1) : Scalar(1);
        acc += std::conj(psi[static_cast<Eigen::Index>(uk ^ y_mask)]) * (sign * psi[k]);
    }
    return (acc * base_phase).real();
}

} // namespace detail

template <typename Scalar>
ObservableSet pauli_expectations(const StateVectorX<Scalar> &psi, const IsingInstance &inst) {
    if (qubit_count(psi) != inst.n()) {
        throw InputError("pauli_expectations: qubit count mismatch");
    }
    ObservableSet out;
    for (const auto &c : inst.couplings()) {
        const std::uint64_t bi = std::uint64_t{1} << c.i;
        const std::uint64_t bj = std::uint64_t{1} << c.j;
        out.zz += c.w * static_cast<double>(detail::pauli_zy_expectation(psi, bi | bj, 0));
        out.yy += c.w * static_cast<double>(detail::pauli_zy_expectation(psi, 0, bi | bj));
        out.zy += c.w * static_cast<double>(detail::pauli_zy_expectation(psi, bi, bj) +
                                            detail::pauli_zy_expectation(psi, bj, bi));
    }
    for (const auto &f : inst.fields()) {
        const std::uint64_t bi = std::uint64_t{1} << f.i;
        out.z += f.w * static_cast<double>(detail::pauli_zy_expectation(psi, bi, 0));
        out.y += f.w * static_cast<double>(detail::pauli_zy_expectation(psi, 0, bi));
    }
    return out;
}

/// M i.i.d. measurements in the computational basis.
template <typename Scalar>
ShotSet sample(const StateVectorX<Scalar> &psi, std::uint64_t shots, Seed seed) {
    if (shots < 1) {
        throw InputError("sample: at least one shot required");
    }
    const int n = qubit_count(psi);
    std::vector<double> cdf(static_cast<std::size_t>(psi.size()));
    double running = 0.0;
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        running += static_cast<double>(std::norm(psi[k]));
        cdf[static_cast<std::size_t>(k)] = running;
    }
    Rng rng(seed);
    ShotSet out;
    out.n = n;
    out.shots = shots;
    for (std::uint64_t m = 0; m < shots; ++m) {
        const double u = rng.uniform() * running;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        ++out.counts[static_cast<std::uint64_t>(it - cdf.begin())];
    }
    return out;
}

template <typename Scalar>
double estimate_energy(const ShotSet &shots, const Spectrum<Scalar> &spec) {
    if (shots.shots == 0 || shots.counts.empty()) {
        throw InputError("estimate_energy: empty shot set");
    }
    if (shots.n != spec.n) {
        throw InputError("estimate_energy: qubit count mismatch");
    }
    double total = 0.0;
    for (const auto &[k, count] : shots.counts) {
        total += static_cast<double>(count) * static_cast<double>(spec.energies[static_cast<Eigen::Index>(k)]);
    }
    return total / static_cast<double>(shots.shots);
}

inline double estimate_energy(const ShotSet &shots, const IsingInstance &inst) {
    if (shots.shots == 0 || shots.counts.empty()) {
        throw InputError("estimate_energy: empty shot set");
    }
    if (shots.n != inst.n()) {
        throw InputError("estimate_energy: qubit count mismatch");
    }
    double total = 0.0;
    for (const auto &[k, count] : shots.counts) {
        total += static_cast<double>(count) * energy_of_index(inst, k);
    }
    return total / static_cast<double>(shots.shots);
}

/// Debug dump: int32 n, then little-endian (re, im) doubles per amplitude.
void write_state_dump(std::ostream &out, const StateVector &psi);
StateVector read_state_dump(std::istream &in);

} // namespace pentao
